"""Systems of Γ-polynomials, weight vectors and the PET-induction reduction engine."""
import logging
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from src.config import config
from src.errors import (
    DuplicateElement,
    IdentityElement,
    ModelMismatch,
    NotInPG0,
    NotMinimal,
    PrecedenceViolation,
    PreconditionViolated,
    StepBudgetExceeded,
)
from src.gpoly import Weight, gp_inverse, gp_multiply, relative_derived_form, shift_gap_sequence

logger = logging.getLogger(__name__)

QUOTIENT = 'quotient'
PROOF_STEP = 'proof_step'
RULES = (QUOTIENT, PROOF_STEP)


class PolySystem:
    """A finite list of pairwise distinct Γ-polynomials over one model."""

    def __init__(self, elements):
        self.elements = tuple(elements)
        seen = set()
        for g in self.elements:
            if g in seen:
                raise DuplicateElement(f"system contains {g} twice")
            seen.add(g)
        names = {g.model.name for g in self.elements}
        if len(names) > 1:
            raise ModelMismatch(f"system mixes models {sorted(names)}")

    @classmethod
    def merged(cls, elements):
        """Build a system, dropping repeated canonical forms"""
        unique = []
        seen = set()
        for g in elements:
            if g not in seen:
                seen.add(g)
                unique.append(g)
        return cls(unique)

    def without_identity(self):
        return PolySystem([g for g in self.elements if not g.is_identity])

    @property
    def model(self):
        return self.elements[0].model if self.elements else None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.elements

    def __eq__(self, other):
        return isinstance(other, PolySystem) and set(self.elements) == set(other.elements)

    def __hash__(self):
        return hash(frozenset(self.elements))

    def __repr__(self):
        return f"PolySystem([{', '.join(str(g) for g in self.elements)}])"


@dataclass(frozen=True)
class WeightVector:
    entries: tuple = ()

    def __post_init__(self):
        entries = tuple(sorted((Weight(*w), int(m)) for w, m in self.entries if m))
        for (w, _), (u, _) in zip(entries, entries[1:]):
            if w == u:
                raise ValueError(f"weight {w} listed twice")
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def of(cls, *pairs):
        """WeightVector.of((2, (1, 1)), (1, (1, 2))) reads as (2(1,1), 1(1,2))"""
        return cls(tuple((Weight(*w), m) for m, w in pairs))

    def multiplicity(self, w):
        for u, m in self.entries:
            if u == w:
                return m
        return 0

    @property
    def weights(self):
        return [w for w, _ in self.entries]

    @property
    def is_empty(self):
        return not self.entries

    @property
    def is_base(self):
        return self.entries == ((Weight(1, 1), 1),)

    def precedes(self, other):
        """self ≺ other"""
        for w in sorted(set(self.weights) | set(other.weights), reverse=True):
            mine, theirs = self.multiplicity(w), other.multiplicity(w)
            if mine != theirs:
                return theirs > mine
        return False

    def to_list(self):
        return [[w.l, w.k, m] for w, m in self.entries]

    def __str__(self):
        return '(' + ','.join(f"{m}{w}" for w, m in self.entries) + ')'


def weight_vector(A):
    """Number of ∼-classes per weight, identity elements excluded"""
    classes = {}
    for g in A:
        if g.is_identity:
            continue
        w = g.weight()
        if w.k == 0:
            logger.warning(f"constant non-identity element {g} has weight {w}")
        classes.setdefault(w, set()).add(g.leading_coefficient())
    return WeightVector(tuple((w, len(c)) for w, c in classes.items()))


def _as_vector(x):
    return x if isinstance(x, WeightVector) else weight_vector(x)


def precedes(A_prime, A):
    return _as_vector(A_prime).precedes(_as_vector(A))


def minimal_element(A):
    """Minimal-weight non-identity element; ties go to the smallest coefficient vector"""
    candidates = [g for g in A if not g.is_identity]
    if not candidates:
        raise PreconditionViolated("system has no non-identity element")
    return min(candidates, key=lambda g: (g.weight(), g.key))


def quotient_system(A, h):
    """{ g h^-1 : g in A } with repeats merged; the identity stays in the result"""
    if h.is_identity:
        raise IdentityElement("cannot divide a system by the identity")
    if h not in A:
        raise PreconditionViolated(f"{h} is not an element of the system")
    w = h.weight()
    for g in A:
        if not g.is_identity and g.weight() < w:
            raise NotMinimal(f"{g} has weight {g.weight()} below {h}'s weight {w}")
    h_inv = gp_inverse(h)
    return PolySystem.merged(gp_multiply(g, h_inv) for g in A)


def proof_step_system(A, f, shifts):
    """Derived system { f_t(k)^-1 f_t(n+k) f(n)^-1 : t, k in shifts } without identities"""
    before = weight_vector(A)
    forms = []
    for f_t in A:
        if f_t.is_identity:
            continue
        for k in shifts:
            d = relative_derived_form(f_t, f, k)
            if d.is_identity:
                continue
            if d.degree == 0:
                logger.warning(f"dropping constant non-identity derived form {d}")
                continue
            forms.append(d)
    derived = PolySystem.merged(forms)
    after = weight_vector(derived)
    if not after.precedes(before):
        raise PrecedenceViolation(f"derived system {after} does not precede {before} (shifts {shifts})")
    return derived


class ReductionStep(NamedTuple):
    system: PolySystem
    weight_vector: WeightVector
    rule: Optional[str]
    minimal: Optional[object]
    shifts: Optional[tuple]


@dataclass
class ReductionTrace:
    steps: list = field(default_factory=list)
    terminal: Optional[PolySystem] = None

    @property
    def weight_vectors(self):
        return [step.weight_vector for step in self.steps]

    def is_strictly_decreasing(self):
        vectors = self.weight_vectors
        return all(b.precedes(a) for a, b in zip(vectors, vectors[1:]))


def pet_reduce(A, rule=QUOTIENT, ell=None, max_steps=None, max_size=None, time_limit=None):
    """Reduce A by PET-induction until it is empty or its weight vector is (1(1,1))

    The proof_step rule with ell >= 2 grows the system quickly past degree 2, so the run is
    also bounded by system size and wall-clock seconds; both raise StepBudgetExceeded.
    """
    if rule not in RULES:
        raise PreconditionViolated(f"unknown rule '{rule}', expected one of {RULES}")
    if not len(A):
        raise PreconditionViolated("cannot reduce an empty system")
    for g in A:
        if not g.in_pg0:
            raise NotInPG0(f"{g} does not vanish at n = 0")
    ell = config.get('pet', 'ell') if ell is None else ell
    max_steps = max_steps or config.get('pet', 'max_steps')
    max_size = max_size or config.get('pet', 'max_size')
    time_limit = config.get('pet', 'time_limit') if time_limit is None else time_limit
    started = time.monotonic()

    total_degree = sum(max(g.degree, 0) for g in A)
    bound = 10 * total_degree * len(A) ** 2

    trace = ReductionTrace()
    system = A.without_identity()
    while True:
        phi = weight_vector(system)
        if phi.is_empty or phi.is_base:
            trace.steps.append(ReductionStep(system, phi, None, None, None))
            trace.terminal = system
            break
        if len(trace.steps) >= max_steps:
            raise StepBudgetExceeded(f"PET reduction did not terminate within {max_steps} steps")
        if time.monotonic() - started > time_limit:
            raise StepBudgetExceeded(
                f"PET reduction ({rule}, ell={ell}) passed {time_limit}s after {len(trace.steps)} steps; try a smaller ell"
            )

        f = minimal_element(system)
        if rule == QUOTIENT:
            shifts = None
            reduced = quotient_system(system, f).without_identity()
        else:
            others = [g for g in system if g != f]
            shifts = shift_gap_sequence([f] + others, ell)
            reduced = proof_step_system(system, f, shifts)
            if len(reduced) > max_size:
                raise StepBudgetExceeded(
                    f"proof_step system grew to {len(reduced)} elements (limit {max_size}) at {phi}; try a smaller ell"
                )

        new_phi = weight_vector(reduced)
        if not new_phi.precedes(phi):
            raise PrecedenceViolation(f"{rule} step from {phi} produced {new_phi}")
        logger.debug(f"PET {rule} step: {phi} -> {new_phi} (minimal {f}, shifts {shifts})")
        trace.steps.append(ReductionStep(system, phi, rule, f, shifts))
        system = reduced

    if len(trace.steps) > bound:
        logger.warning(f"PET reduction took {len(trace.steps)} steps, above the empirical bound {bound}")
    logger.info(f"PET reduction ({rule}) finished in {len(trace.steps)} steps")
    return trace


def export_trace(trace):
    """JSON-ready list of steps"""
    return [
        {
            'system': [str(g) for g in step.system],
            'weight_vector': step.weight_vector.to_list(),
            'rule': step.rule,
            'minimal': str(step.minimal) if step.minimal is not None else None,
            'shifts': list(step.shifts) if step.shifts is not None else None,
        }
        for step in trace.steps
    ]
