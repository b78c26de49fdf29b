import json
import sys
from pathlib import Path

import numpy as np

sys.path.append(str(Path(__file__).resolve().parent.parent))

from src.gpoly import GammaPolynomial, IntegralPolynomial  # noqa: E402
from src.nilgroup import abelian, heisenberg  # noqa: E402
from src.pet import PolySystem  # noqa: E402
from src.zsets import WindowSet  # noqa: E402


def random_poly(rng, degree, radius=3, constant=False):
    """Integer monomial coefficients with a non-zero top term; no constant term unless asked"""
    coeffs = [int(c) for c in rng.integers(-radius, radius + 1, size=degree + 1)]
    if not constant:
        coeffs[0] = 0
    if degree > 0 and coeffs[-1] == 0:
        coeffs[-1] = int(rng.choice([-1, 1])) * int(rng.integers(1, radius + 1))
    return IntegralPolynomial.from_monomials(coeffs)


def random_gpoly(rng, model, max_degree=3, radius=3, pg0=True):
    """Random non-identity Γ-polynomial; in PG_0 unless pg0 is False"""
    top = int(rng.integers(1, model.s + 1))
    components = []
    for j in range(1, model.s + 1):
        if j > top:
            components.append(IntegralPolynomial.zero())
        elif j == top:
            components.append(random_poly(rng, int(rng.integers(1, max_degree + 1)), radius, not pg0))
        elif rng.random() < 0.3:
            components.append(IntegralPolynomial.zero())
        else:
            components.append(random_poly(rng, int(rng.integers(0, max_degree + 1)), radius, not pg0))
    return GammaPolynomial(model, tuple(components))


def perturb_lower(rng, g, radius=3):
    """An element equivalent to g: lower components and lower-degree terms of the top one change"""
    l, k = g.weight()
    components = list(g.components)
    for j in range(l - 1):
        components[j] = random_poly(rng, int(rng.integers(0, k + 2)), radius)
    if k >= 2:
        extra = [0] + [int(c) for c in rng.integers(-radius, radius + 1, size=k - 1)]
        components[l - 1] = components[l - 1] + IntegralPolynomial.from_monomials(extra)
    return GammaPolynomial(g.model, tuple(components))


def random_system(rng, model, size, max_degree=3, radius=3):
    """Up to `size` distinct PG_0* elements"""
    elements = []
    for _ in range(size * 4):
        g = random_gpoly(rng, model, max_degree, radius)
        if g not in elements:
            elements.append(g)
        if len(elements) == size:
            break
    return PolySystem(elements)


def corpus_models():
    return [abelian(1), abelian(2), abelian(3), heisenberg()]


def random_corpus(seed=0, count=200, max_s=3, max_degree=4, max_size=6):
    rng = np.random.default_rng(seed)
    models = [m for m in corpus_models() if m.s <= max_s]
    systems = []
    for _ in range(count):
        model = models[int(rng.integers(0, len(models)))]
        systems.append(random_system(rng, model, int(rng.integers(1, max_size + 1)), max_degree))
    return systems


def block_set(rng, lo, hi, hole, min_block, max_block):
    """Window set whose complement is holes of exactly `hole` points between member blocks"""
    members = np.ones(hi - lo + 1, dtype=bool)
    pos = int(rng.integers(0, max_block))
    while pos < len(members):
        members[pos:pos + hole] = False
        pos += hole + int(rng.integers(min_block, max_block + 1))
    return WindowSet(lo, hi, members)


if __name__ == "__main__":
    out = Path(__file__).resolve().parent.parent / 'data' / 'systems' / 'corpus.json'
    systems = random_corpus(seed=42, count=20, max_s=2, max_degree=3, max_size=4)
    payload = [
        {'model': system.model.name, 'system': [str(g) for g in system]}
        for system in systems
    ]
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=2) + '\n')

    print(f"Wrote {len(payload)} systems to {out}")
    for entry in payload[:5]:
        print(entry['model'], entry['system'])
