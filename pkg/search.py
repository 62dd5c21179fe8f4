"""
Conjecture Search Module
Bounded, seeded search over generated H_1 representations for violations
of the layer conditions [X_m, Y_m] = Z_m and [X_n, Y_m] = 0 (n != m) below
the generic range p >= 2d.

Candidates are described by structural recipes (generator operations plus
seeds) rather than matrices, so every reported violation can be rebuilt
and re-checked with replay_violation().
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import pandas as pd

from generators import (VARIABLE_SETS, direct_sum, frobenius_twist, monomial_basis,
                        monomial_coalgebra_rep, random_lie_layers, tensor_product)
from polyhopf import GroupKind
from repcore import CheckMode, CoefficientFamily, check_layer_relations, extract_layers
from runtime.audit_logger import log_operation
from runtime.config import get_runtime_config
from scalars import FieldSpec, is_prime
from structure import construct_h1_charp

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ('coalgebra', 'tensor', 'sum', 'lie_construct')

# conditions that hold for every representation; a failure is a bug
UNCONDITIONAL = frozenset('abc')

CAVEAT = ("No violation found within the budget is not evidence against the conjectures: "
          "the generator families cover a strict subset of all modules.")


class SearchConfigError(ValueError):
    """Raised for an invalid SearchConfig."""


# ============ Recipes ============

@dataclass(frozen=True)
class CoalgebraRecipe:
    degree: int
    variables: str = 'xyz'
    twist: int = 0
    kind = 'coalgebra'

    def dim(self) -> int:
        return len(monomial_basis(GroupKind.H1, self.degree, self.variables))

    def build(self, p: int) -> CoefficientFamily:
        family = monomial_coalgebra_rep(FieldSpec.prime(p), GroupKind.H1, self.degree, self.variables)
        return frobenius_twist(family, self.twist) if self.twist else family

    def describe(self) -> str:
        twist = f"^(p^{self.twist})" if self.twist else ""
        return f"coalg(D={self.degree},{self.variables}){twist}"

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'degree': self.degree, 'variables': self.variables, 'twist': self.twist}


@dataclass(frozen=True)
class TensorRecipe:
    left: 'Recipe'
    right: 'Recipe'
    kind = 'tensor'

    def dim(self) -> int:
        return self.left.dim() * self.right.dim()

    def build(self, p: int) -> CoefficientFamily:
        return tensor_product(self.left.build(p), self.right.build(p))

    def describe(self) -> str:
        return f"({self.left.describe()} (x) {self.right.describe()})"

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'left': self.left.to_dict(), 'right': self.right.to_dict()}


@dataclass(frozen=True)
class SumRecipe:
    left: 'Recipe'
    right: 'Recipe'
    kind = 'sum'

    def dim(self) -> int:
        return self.left.dim() + self.right.dim()

    def build(self, p: int) -> CoefficientFamily:
        return direct_sum(self.left.build(p), self.right.build(p))

    def describe(self) -> str:
        return f"({self.left.describe()} + {self.right.describe()})"

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'left': self.left.to_dict(), 'right': self.right.to_dict()}


@dataclass(frozen=True)
class LieRecipe:
    seed: int
    layers: int
    size: int
    kind = 'lie_construct'

    def dim(self) -> int:
        return self.size

    def build(self, p: int) -> CoefficientFamily:
        data = random_lie_layers(random.Random(self.seed), p, self.size, self.layers)
        return construct_h1_charp(data)

    def describe(self) -> str:
        return f"lie(seed={self.seed},layers={self.layers},d={self.size})"

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'seed': self.seed, 'layers': self.layers, 'dim': self.size}


Recipe = Union[CoalgebraRecipe, TensorRecipe, SumRecipe, LieRecipe]


def recipe_from_dict(data: Mapping[str, Any]) -> Recipe:
    kind = data.get('kind')
    if kind == 'coalgebra':
        return CoalgebraRecipe(int(data['degree']), data['variables'], int(data.get('twist', 0)))
    if kind == 'tensor':
        return TensorRecipe(recipe_from_dict(data['left']), recipe_from_dict(data['right']))
    if kind == 'sum':
        return SumRecipe(recipe_from_dict(data['left']), recipe_from_dict(data['right']))
    if kind == 'lie_construct':
        return LieRecipe(int(data['seed']), int(data['layers']), int(data['dim']))
    raise SearchConfigError(f"unknown recipe kind {kind!r}")


# ============ Configuration and report ============

@dataclass(frozen=True)
class SearchConfig:
    """
    Search parameters. ``target_dim`` defaults to (p+1)/2 (rounded down);
    ``mix`` weights the generator kinds; ``twists`` is the largest Frobenius
    twist applied to coalgebra candidates.
    """
    p: int
    target_dim: Optional[int] = None
    budget: Optional[int] = None
    seed: Optional[int] = None
    mix: Mapping[str, float] = dc_field(default_factory=lambda: {k: 1.0 for k in GENERATOR_KINDS})
    fail_fast: bool = False
    min_dim: int = 1
    variable_sets: Tuple[str, ...] = VARIABLE_SETS[GroupKind.H1]
    twists: int = 1
    workers: Optional[int] = None

    def __post_init__(self):
        runtime = get_runtime_config()
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise SearchConfigError(f"p={self.p!r} is not a prime")
        if self.target_dim is None:
            object.__setattr__(self, 'target_dim', (self.p + 1) // 2)
        if self.budget is None:
            object.__setattr__(self, 'budget', runtime.search_budget)
        if self.seed is None:
            object.__setattr__(self, 'seed', runtime.search_seed)
        if self.workers is None:
            object.__setattr__(self, 'workers', runtime.search_workers)
        object.__setattr__(self, 'mix', dict(self.mix))
        object.__setattr__(self, 'variable_sets', tuple(self.variable_sets))

        if self.target_dim < 1:
            raise SearchConfigError(f"target_dim must be positive, got {self.target_dim}")
        if not 1 <= self.min_dim <= self.target_dim:
            raise SearchConfigError(f"min_dim must lie in [1, {self.target_dim}], got {self.min_dim}")
        if self.budget < 1:
            raise SearchConfigError(f"budget must be at least 1, got {self.budget}")
        if self.workers < 1:
            raise SearchConfigError(f"workers must be at least 1, got {self.workers}")
        if self.twists < 0:
            raise SearchConfigError(f"twists must be nonnegative, got {self.twists}")
        unknown = set(self.mix) - set(GENERATOR_KINDS)
        if unknown:
            raise SearchConfigError(f"unknown generator kinds: {', '.join(sorted(unknown))}")
        if any(w < 0 for w in self.mix.values()) or not any(w > 0 for w in self.mix.values()):
            raise SearchConfigError("mix weights must be nonnegative and not all zero")
        for variables in self.variable_sets:
            if variables not in VARIABLE_SETS[GroupKind.H1]:
                raise SearchConfigError(f"variable set {variables!r} is not Delta-closed")


@dataclass(frozen=True)
class SearchViolation:
    """A failed layer identity on one candidate."""
    index: int
    recipe: Recipe
    dim: int
    condition: str
    layers: Tuple[int, ...]
    identity: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            'index': self.index,
            'recipe': self.recipe.to_dict(),
            'candidate': self.recipe.describe(),
            'dim': self.dim,
            'condition': self.condition,
            'layers': list(self.layers),
            'identity': self.identity,
        }


@dataclass
class SearchReport:
    p: int
    target_dim: int
    seed: int
    candidates_examined: int = 0
    violations: List[SearchViolation] = dc_field(default_factory=list)
    internal_errors: List[SearchViolation] = dc_field(default_factory=list)
    exhausted: bool = False
    caveat: str = CAVEAT

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p': self.p,
            'target_dim': self.target_dim,
            'seed': self.seed,
            'candidates_examined': self.candidates_examined,
            'exhausted': self.exhausted,
            'violations': [v.to_dict() for v in self.violations],
            'internal_errors': [v.to_dict() for v in self.internal_errors],
            'caveat': self.caveat,
        }

    def to_frame(self) -> pd.DataFrame:
        """Violations and internal errors as one table, in candidate order."""
        columns = ['index', 'candidate', 'dim', 'condition', 'layers', 'identity', 'internal']
        rows = [
            {**v.to_dict(), 'layers': tuple(v.layers), 'internal': internal}
            for internal, items in ((False, self.violations), (True, self.internal_errors))
            for v in items
        ]
        frame = pd.DataFrame(rows, columns=columns + ['recipe'])[columns]
        return frame.sort_values('index', kind='stable').reset_index(drop=True)


# ============ Candidate generation and evaluation ============

def _base_recipes(cfg: SearchConfig) -> List[CoalgebraRecipe]:
    """Coalgebra recipes of dimension <= target_dim (trivial one included)."""
    recipes = [CoalgebraRecipe(0, 'xyz', 0)]
    for variables in cfg.variable_sets:
        for twist in range(cfg.twists + 1):
            degree = 1
            while True:
                recipe = CoalgebraRecipe(degree, variables, twist)
                if recipe.dim() > cfg.target_dim:
                    break
                recipes.append(recipe)
                degree += 1
    return recipes


def _candidate_pools(cfg: SearchConfig) -> Dict[str, List[Recipe]]:
    base = _base_recipes(cfg)
    in_range = lambda r: cfg.min_dim <= r.dim() <= cfg.target_dim
    pairs = [(a, b) for i, a in enumerate(base) for b in base[i:]]
    return {
        'coalgebra': [r for r in base if in_range(r)],
        'tensor': [r for r in (TensorRecipe(a, b) for a, b in pairs) if in_range(r)],
        'sum': [r for r in (SumRecipe(a, b) for a, b in pairs) if in_range(r)],
    }


def generate_candidates(cfg: SearchConfig) -> Tuple[List[Recipe], bool]:
    """
    Draw up to ``budget`` recipes. Finite pools are sampled without
    replacement; lie_construct candidates are drawn only when p >= 2 *
    target_dim. Returns the recipes and whether every pool ran dry.
    """
    rng = random.Random(cfg.seed)
    pools = _candidate_pools(cfg)
    lie_allowed = cfg.p >= 2 * cfg.target_dim and cfg.mix.get('lie_construct', 0) > 0

    recipes: List[Recipe] = []
    while len(recipes) < cfg.budget:
        kinds = [k for k in ('coalgebra', 'tensor', 'sum') if pools[k] and cfg.mix.get(k, 0) > 0]
        if lie_allowed:
            kinds.append('lie_construct')
        if not kinds:
            return recipes, True
        kind = rng.choices(kinds, weights=[cfg.mix[k] for k in kinds])[0]
        if kind == 'lie_construct':
            recipes.append(LieRecipe(seed=rng.getrandbits(32), layers=rng.randint(1, 2),
                                     size=rng.randint(cfg.min_dim, cfg.target_dim)))
        else:
            pool = pools[kind]
            recipes.append(pool.pop(rng.randrange(len(pool))))
    return recipes, False


def evaluate_candidate(task: Tuple[int, Recipe, int]
                       ) -> Tuple[Optional[SearchViolation], List[SearchViolation]]:
    """
    Build one candidate and run the full layer check. Returns the first
    failure of (d), (e) or (f), if any, and every failure of the
    unconditional identities (a), (b), (c), so neither masks the other.
    """
    index, recipe, p = task
    family = recipe.build(p)
    report = check_layer_relations(extract_layers(family), CheckMode.REPORT)
    found = [SearchViolation(index, recipe, family.dim, v.condition, tuple(v.site), v.description)
             for v in report.violations]
    conditional = next((v for v in found if v.condition not in UNCONDITIONAL), None)
    return conditional, [v for v in found if v.condition in UNCONDITIONAL]


def run_conjecture_search(cfg: SearchConfig) -> SearchReport:
    """
    Generate candidates, factor each into Frobenius layers and check every
    layer identity. The first failure of (d), (e) or (f) on a candidate is
    its violation; every failure of (a), (b) or (c) is an internal error.
    Results are aggregated in candidate order regardless of ``workers``.
    """
    with log_operation('run_conjecture_search', {'p': cfg.p, 'target_dim': cfg.target_dim,
                                                 'budget': cfg.budget, 'seed': cfg.seed,
                                                 'workers': cfg.workers}) as ctx:
        recipes, exhausted = generate_candidates(cfg)
        report = SearchReport(cfg.p, cfg.target_dim, cfg.seed, exhausted=exhausted)
        tasks = [(i, r, cfg.p) for i, r in enumerate(recipes)]

        if cfg.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                outcomes = list(pool.map(evaluate_candidate, tasks))
        else:
            outcomes = []
            for task in tasks:
                outcomes.append(evaluate_candidate(task))
                if cfg.fail_fast and outcomes[-1][0] is not None:
                    break

        for index, (violation, internal) in enumerate(outcomes):
            report.candidates_examined = index + 1
            for error in internal:
                logger.error("candidate %s failed unconditional identity %s",
                             error.recipe.describe(), error.identity)
            report.internal_errors.extend(internal)
            if violation is None:
                continue
            report.violations.append(violation)
            if cfg.fail_fast:
                break

        ctx['result'] = {'examined': report.candidates_examined, 'violations': len(report.violations),
                         'internal_errors': len(report.internal_errors), 'exhausted': report.exhausted}
        logger.info("search p=%d d<=%d: %d candidates, %d violations",
                    cfg.p, cfg.target_dim, report.candidates_examined, len(report.violations))
        return report


def replay_violation(violation: SearchViolation, p: int) -> bool:
    """Rebuild the candidate and check that the same conditional identity fails first."""
    outcome, _ = evaluate_candidate((violation.index, violation.recipe, p))
    return (outcome is not None and outcome.condition == violation.condition
            and outcome.layers == violation.layers and outcome.identity == violation.identity)
