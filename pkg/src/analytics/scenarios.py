import logging
from dataclasses import dataclass

from src.analytics.probes import smallest_gap
from src.dynsys import product_return_set, return_set
from src.nilgroup import abelian
from src.notation import parse_gpoly, parse_poly
from src.pet import PROOF_STEP, QUOTIENT, PolySystem, pet_reduce, weight_vector
from src.zsets import is_syndetic_at, is_thickly_syndetic_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    name: str
    title: str
    polynomials: tuple
    hi: int


SCENARIOS = {
    'case1': Scenario('case1', 'distinct linear exponents, weight vector (d(1,1))', ('n', '2n', '3n'), 10000),
    'case2': Scenario('case2', 'equal quadratic parts, weight vector (1(1,2))', ('n^2+n', 'n^2+2n'), 1000),
    'case3': Scenario('case3', 'linear and quadratic mix, weight vector (r(1,1),1(1,2))', ('n', '2n', 'n^2+n'), 1000),
    'case4': Scenario('case4', 'the pair n^2, 2n^2, weight vector (2(1,2))', ('n^2', '2n^2'), 1000),
}


class ScenarioRunner:
    def __init__(self, sys, pattern='0', run=3, limit=2000, ell=0):
        self.sys = sys
        self.pattern = pattern
        self.run = run
        self.limit = limit
        self.ell = ell
        self.model = abelian(1)

    def system(self, scenario):
        return PolySystem([parse_gpoly(f"T^{{{p}}}", self.model) for p in scenario.polynomials])

    def run_scenario(self, name):
        """PET traces under both rules plus windowed return-set verdicts"""
        try:
            scenario = SCENARIOS[name]
            system = self.system(scenario)
            polys = [parse_poly(p) for p in scenario.polynomials]
            window = (0, scenario.hi)
            U = self.sys.cylinder(self.pattern)

            traces = {
                rule: [str(v) for v in pet_reduce(system, rule, ell=self.ell).weight_vectors]
                for rule in (QUOTIENT, PROOF_STEP)
            }
            diagonal = return_set(self.sys, U, [(p, U) for p in polys], window)
            product = product_return_set(self.sys, [(p, U, U) for p in polys], window)
            result = {
                'name': scenario.name,
                'title': scenario.title,
                'polynomials': list(scenario.polynomials),
                'weight_vector': str(weight_vector(system)),
                'traces': traces,
                'window': list(window),
                'diagonal_members': diagonal.count,
                'diagonal_syndetic_gap': smallest_gap(lambda g: is_syndetic_at(diagonal, g), self.limit),
                'product_members': product.count,
                'product_thick_syndetic_gap': smallest_gap(
                    lambda g: is_thickly_syndetic_at(product, self.run, g), self.limit
                ),
            }
            logger.info(f"Scenario {name}: {result['weight_vector']}, gaps "
                        f"{result['diagonal_syndetic_gap']} / {result['product_thick_syndetic_gap']}")
            return result
        except Exception as e:
            logger.error(f"Error in scenario {name}: {str(e)}")
            raise

    def run_all(self):
        return [self.run_scenario(name) for name in SCENARIOS]
