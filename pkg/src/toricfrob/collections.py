"""Exceptional-collection checks and fullness certificates.

Strongness is decided by exact Ext vanishing for all ordered pairs; an
exceptional order is a topological sort of the Hom^0 digraph.  Fullness
is certified by closing the collection under twisted Koszul complexes of
primitive collections until it swallows the summand sets of the
anticanonical powers, which generate the derived category.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .cohomology import ext_dims
from .divisor_pic import class_of, pushforward
from .frobenius import stable_summands_cached
from .lattice_fan import Blowdown, Fan, primitive_collections

DEFAULT_COEFF_BOUND = 8
DEFAULT_TWIST_BOUND = 8
DEFAULT_MAX_CLASSES = 20000


@dataclass(frozen=True)
class StrongFailure:
    pair: tuple[int, int]  # Hom^degree(classes[pair[0]], classes[pair[1]]) != 0
    degree: int
    dim: int


@dataclass(frozen=True)
class CollectionReport:
    classes: tuple[tuple[int, ...], ...]
    is_exceptional_each: tuple[bool, ...]
    strong: bool
    strong_failures: tuple[StrongFailure, ...]
    order: tuple[int, ...] | None
    order_cycle: tuple[int, ...] | None
    size_matches_rank: bool
    rank: int

    @property
    def passed(self) -> bool:
        return (
            all(self.is_exceptional_each)
            and self.strong
            and self.order is not None
            and self.size_matches_rank
        )


def check_collection(fan: Fan, classes) -> CollectionReport:
    """Verify exceptionality, strongness and an exceptional order.

    Each line bundle is exceptional iff the structure sheaf has no higher
    cohomology (verified, not assumed).  The order, when it exists, is the
    topological sort of the digraph with an edge i -> j whenever
    Hom^0(c_i, c_j) != 0, so that Hom^0(later, earlier) = 0.
    """
    classes = tuple(tuple(c) for c in classes)
    if len(set(classes)) != len(classes):
        raise ValueError("collection classes must be distinct")
    n = len(classes)
    zero = (0,) * fan.n_rays
    o_table = ext_dims(fan, zero, zero)
    exceptional = all(x == 0 for x in o_table.dims[1:]) and o_table.h(0) == 1

    failures = []
    for i, j in itertools.product(range(n), repeat=2):
        if i == j:
            continue
        table = ext_dims(fan, classes[i], classes[j])
        for deg in range(1, fan.dim + 1):
            if table.h(deg) != 0:
                failures.append(StrongFailure((i, j), deg, table.h(deg)))
    strong = not failures

    order = None
    cycle = None
    if exceptional and strong:
        order, cycle = _exceptional_order(fan, classes)

    return CollectionReport(
        classes=classes,
        is_exceptional_each=(exceptional,) * n,
        strong=strong,
        strong_failures=tuple(failures),
        order=order,
        order_cycle=cycle,
        size_matches_rank=(n == len(fan.max_cones)),
        rank=len(fan.max_cones),
    )


def _exceptional_order(fan: Fan, classes):
    """Topological sort with edge i -> j when Hom^0(c_i, c_j) != 0."""
    n = len(classes)
    succ = {i: set() for i in range(n)}
    indeg = {i: 0 for i in range(n)}
    for i, j in itertools.product(range(n), repeat=2):
        if i != j and ext_dims(fan, classes[i], classes[j]).h(0) > 0:
            succ[i].add(j)
            indeg[j] += 1
    order = []
    ready = sorted((i for i in range(n) if indeg[i] == 0),
                   key=lambda i: (classes[i], i))
    while ready:
        i = ready.pop(0)
        order.append(i)
        changed = False
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
                changed = True
        if changed:
            ready.sort(key=lambda i: (classes[i], i))
    if len(order) == n:
        return tuple(order), None
    # witness cycle among the unsorted vertices
    remaining = [i for i in range(n) if i not in order]
    cycle = _find_cycle(succ, remaining)
    return None, cycle


def _find_cycle(succ, remaining):
    # every unsortable vertex keeps a predecessor among the unsortable ones,
    # so walking predecessors must close up
    rem = set(remaining)
    pred = {i: [j for j in rem if i in succ[j]] for i in rem}
    path = [remaining[0]]
    seen = {remaining[0]}
    while True:
        nxt = min(pred[path[-1]])
        if nxt in seen:
            seg = path[path.index(nxt):]
            return (nxt,) + tuple(reversed(seg))
        path.append(nxt)
        seen.add(nxt)


def find_strong_subsets(fan: Fan, classes, k: int):
    """All k-element subsets passing the strongness and order checks."""
    classes = [tuple(c) for c in classes]
    if k > len(classes):
        raise ValueError("k exceeds the number of classes")
    out = []
    for subset in itertools.combinations(sorted(classes), k):
        if check_collection(fan, subset).passed:
            out.append(subset)
    return out


# -- Koszul closure --------------------------------------------------------


@dataclass(frozen=True)
class KoszulMove:
    """Twisted Koszul complex data for a primitive collection.

    terms[k] holds the classes in homological position k with their
    binomial multiplicities; the complex has len(primitive)+1 positions and
    is exact because the primitive collection's divisors have empty common
    intersection.
    """

    primitive: tuple[int, ...]
    twist: tuple[int, ...]
    terms: tuple[tuple[tuple[tuple[int, ...], int], ...], ...]

    def term_classes(self) -> set:
        return {c for pos in self.terms for c, _ in pos}


def koszul_move(fan: Fan, primitive, twist) -> KoszulMove:
    """The terms class_of(twist - sum_{i in T} D_i) over subsets T of the
    primitive collection, grouped by |T| and counted with multiplicity."""
    primitive = tuple(primitive)
    twist = class_of(fan, twist)
    terms = []
    for size in range(len(primitive) + 1):
        counts: dict = {}
        for subset in itertools.combinations(primitive, size):
            d = list(twist)
            for i in subset:
                d[i] -= 1
            c = class_of(fan, tuple(d))
            counts[c] = counts.get(c, 0) + 1
        terms.append(tuple(sorted(counts.items())))
    return KoszulMove(primitive, twist, tuple(terms))


@dataclass
class ClosureResult:
    classes: set
    trace: list
    truncated: bool
    coeff_bound: int
    twist_bound: int


def _in_box(c, bound: int) -> bool:
    return all(abs(x) <= bound for x in c)


def koszul_closure(
    fan: Fan,
    seed,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    twist_bound: int = DEFAULT_TWIST_BOUND,
    max_classes: int = DEFAULT_MAX_CLASSES,
    target=None,
) -> ClosureResult:
    """Fixpoint of the Koszul move on a seed set of divisor classes.

    For a primitive collection P and a twist class L, the twisted Koszul
    complex has one term class_of(L - sum_{i in T} D_i) for every subset T
    of P, and it is exact because the divisors of P have empty common
    intersection.  Whenever all but one of its term classes lie in the
    current set, the remaining one is inserted.  The fixpoint search runs a
    worklist of (P, twist) pairs, re-queueing the twists adjacent to newly
    added classes; with `target` given, it stops early once the target is
    contained.
    """
    prims = primitive_collections(fan)
    current = {class_of(fan, c) for c in seed}
    trace = []
    truncated = False
    target = {class_of(fan, c) for c in target} if target is not None else None

    def ray_sums(p):
        out = []
        for size in range(len(p) + 1):
            for t in itertools.combinations(p, size):
                d = [0] * fan.n_rays
                for i in t:
                    d[i] = 1
                out.append(tuple(d))
        return out

    sums_by_prim = {p: ray_sums(p) for p in prims}

    def candidates(c):
        for p, sums in sums_by_prim.items():
            for s in sums:
                twist = class_of(fan, tuple(a + b for a, b in zip(c, s)))
                if _in_box(twist, twist_bound):
                    yield (p, twist)

    pending = set()
    queue = deque()
    for c in sorted(current):
        for cand in candidates(c):
            if cand not in pending:
                pending.add(cand)
                queue.append(cand)

    # breadth-first: the fixpoint is order-independent, but growing outward
    # from the seed lets a target with small coefficients stop the run early
    while queue:
        if target is not None and target <= current:
            break
        p, twist = queue.popleft()
        pending.discard((p, twist))
        terms = {
            class_of(fan, tuple(a - b for a, b in zip(twist, s)))
            for s in sums_by_prim[p]
        }
        missing = terms - current
        if len(missing) != 1:
            continue
        new = missing.pop()
        if not _in_box(new, coeff_bound):
            continue
        current.add(new)
        trace.append({"primitive": list(p), "twist": list(twist), "added": list(new)})
        if len(current) > max_classes:
            truncated = True
            break
        for cand in candidates(new):
            if cand not in pending:
                pending.add(cand)
                queue.append(cand)

    return ClosureResult(current, trace, truncated, coeff_bound, twist_bound)


@dataclass(frozen=True)
class FullnessCertificate:
    status: str  # "certified" | "inconclusive"
    missing: tuple[tuple[int, ...], ...]
    closure_size: int
    trace: tuple = field(compare=False)
    coeff_bound: int = DEFAULT_COEFF_BOUND
    twist_bound: int = DEFAULT_TWIST_BOUND
    generator_m: tuple[int, ...] = ()

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def fullness_certificate(
    fan: Fan,
    classes,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    twist_bound: int = DEFAULT_TWIST_BOUND,
) -> FullnessCertificate:
    """Certify generation of the derived category by the given classes.

    The certificate closes the classes under Koszul moves and asks that the
    closure contain every summand class of the push-forwards of the
    anticanonical powers 0..dim, whose direct sum is a generator.  The
    check never claims non-fullness: a failed closure is inconclusive and
    lists the missing classes.
    """
    target = set()
    gen_m = []
    for i in range(fan.dim + 1):
        s = stable_summands_cached(fan, (i,) * fan.n_rays)
        target |= set(s.classes)
        gen_m.append(s.m_used)
    closure = koszul_closure(
        fan,
        classes,
        coeff_bound=coeff_bound,
        twist_bound=twist_bound,
        target=target,
    )
    missing = tuple(sorted(target - closure.classes))
    status = "certified" if not missing and not closure.truncated else "inconclusive"
    return FullnessCertificate(
        status=status,
        missing=missing,
        closure_size=len(closure.classes),
        trace=tuple(closure.trace),
        coeff_bound=coeff_bound,
        twist_bound=twist_bound,
        generator_m=tuple(gen_m),
    )


# -- pushforward checks ----------------------------------------------------


def pushforward_collection_check(fan_x: Fan, bd: Blowdown) -> bool:
    """Push-forwards of the stable summand classes of the source must equal
    the stable summand classes of the contraction target, as class sets."""
    dx = stable_summands_cached(fan_x, (0,) * fan_x.n_rays).classes
    dy = stable_summands_cached(bd.result, (0,) * bd.result.n_rays).classes
    pushed = {class_of(bd.result, pushforward(bd, c)) for c in dx}
    return pushed == set(dy)


def blowdown_thomsen_check(fan_x: Fan, bd: Blowdown, m: int) -> bool:
    """Exceptional-multiplier check for Thomsen divisors along a blowdown.

    For every residue vector u (with a base cone surviving the contraction),
    the q-divisor on the source equals the pullback of the target q-divisor
    plus a * E with a >= 0, and dropping the exceptional coefficient gives
    the target q-divisor on the nose.
    """
    from ._intlinalg import dot, mat_inverse_unimodular, mat_vec
    from .divisor_pic import support_value

    sigma = next(c for c in fan_x.max_cones if bd.ray not in c)
    inv = mat_inverse_unimodular(fan_x.cone_matrix(sigma))
    v_e = fan_x.rays[bd.ray]
    for u in itertools.product(range(m), repeat=fan_x.dim):
        s = mat_vec(inv, u)
        q_x = tuple(dot(v, s) // m for v in fan_x.rays)
        q_y = tuple(dot(v, s) // m for v in bd.result.rays)
        if pushforward(bd, q_x) != q_y:
            return False
        a = q_x[bd.ray] + support_value(bd.result, q_y, v_e)
        if a < 0:
            return False
    return True
