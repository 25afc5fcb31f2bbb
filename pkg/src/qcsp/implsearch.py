"""Bounded exhaustive search for perfect implementations.

A set of applications S over primary variables X and auxiliary variables Y
perfectly implements a target constraint C when C(X) holds iff some Y makes
every application of S true.  ``check_implementation`` verifies that
equivalence exhaustively; ``find_implementation`` enumerates application sets
of a given constraint set, smallest first, and returns the first one that
checks out.  NotFound (returned as None) is definitive only within the
``max_aux``/``max_apps`` bounds.

Enumeration order is fixed -- by application count, then lexicographically by
(constraint index, argument tuple) -- so identical inputs always produce the
identical witness.  Two prunes keep the search tractable without affecting
the found/NotFound answer: candidates with identical satisfaction masks over
the whole variable pool collapse to the lexicographically first one, and
auxiliary variables must be introduced in index order (variable-role
permutations are skipped).  Both are disabled by ``canonical=False``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .model import Argument, Constraint, ConstraintApplication


@dataclass(frozen=True)
class Implementation:
    target: Constraint
    primary_vars: tuple[str, ...]
    aux_vars: tuple[str, ...]
    apps: tuple[ConstraintApplication, ...]

    def __post_init__(self) -> None:
        if len(self.primary_vars) != self.target.arity:
            raise ValueError("primary variable count must equal the target arity")


def identity_implementation(target: Constraint) -> Implementation:
    xs = tuple(f"x{i + 1}" for i in range(target.arity))
    return Implementation(
        target,
        xs,
        (),
        (ConstraintApplication(target, tuple(Argument(var=v) for v in xs)),),
    )


def check_implementation(impl: Implementation) -> bool:
    """Exhaustively verify C(X) <=> exists Y with all applications true."""
    m = len(impl.primary_vars)
    a = len(impl.aux_vars)
    assignment: dict[str, int] = {}
    for x in range(1 << m):
        for i, v in enumerate(impl.primary_vars):
            assignment[v] = (x >> (m - 1 - i)) & 1
        want = impl.target.value_on(x)
        got = 0
        for y in range(1 << a):
            for i, v in enumerate(impl.aux_vars):
                assignment[v] = (y >> (a - 1 - i)) & 1
            if all(ap.evaluate(assignment) for ap in impl.apps):
                got = 1
                break
        if got != want:
            return False
    return True


def _pool_patterns(m: int, a: int) -> list[int]:
    """Bit pattern of each pool variable over the joint assignment space.

    Point (x << a) | y carries the primary bits in x and aux bits in y, first
    variable of each group most significant.  Two extra entries encode the
    constants 0 and 1.
    """
    points = 1 << (m + a)
    patterns = []
    for p in range(m + a):
        pat = 0
        for point in range(points):
            x, y = point >> a, point & ((1 << a) - 1)
            if p < m:
                bit = (x >> (m - 1 - p)) & 1
            else:
                bit = (y >> (a - 1 - (p - m))) & 1
            pat |= bit << point
        patterns.append(pat)
    patterns.append(0)
    patterns.append((1 << points) - 1)
    return patterns


def _candidate_mask(
    constraint: Constraint, args: tuple[int, ...], patterns: list[int], full: int
) -> int:
    """Satisfaction bitmask of one candidate application over the pool space."""
    k = constraint.arity
    mask = 0
    for row in constraint.satisfying_rows():
        cell = full
        for pos, p in enumerate(args):
            if (row >> (k - 1 - pos)) & 1:
                cell &= patterns[p]
            else:
                cell &= full ^ patterns[p]
            if not cell:
                break
        mask |= cell
    return mask


def _canonical_step(args: tuple[int, ...], m: int, a: int, introduced: int) -> int:
    """Next introduced-aux count, or -1 if args skip an aux index."""
    nxt = introduced
    for p in args:
        if m <= p < m + a:
            rel = p - m
            if rel == nxt:
                nxt += 1
            elif rel > nxt:
                return -1
    return nxt


def find_implementation(
    constraints,
    target: Constraint,
    max_aux: int = 6,
    max_apps: int = 8,
    *,
    canonical: bool = True,
    allow_constants: bool = False,
) -> Implementation | None:
    """First application set of ``constraints`` implementing ``target``.

    Searches over ``target.arity`` primary variables plus up to ``max_aux``
    auxiliaries; returns None when the bounded space is exhausted.  Every
    returned witness is re-verified with :func:`check_implementation`.
    """
    cs = list(constraints)
    m = target.arity
    a = max_aux
    primary = tuple(f"x{i + 1}" for i in range(m))
    aux = tuple(f"y{i + 1}" for i in range(a))
    pool = m + a
    patterns = _pool_patterns(m, a)
    full_state = (1 << (1 << (m + a))) - 1

    arg_values = list(range(pool))
    if allow_constants:
        arg_values += [pool, pool + 1]

    cand_args: list[tuple[int, ...]] = []
    cand_constraint: list[Constraint] = []
    cand_mask: list[int] = []
    seen_masks: set[int] = set()
    for c in cs:
        for args in product(arg_values, repeat=c.arity):
            mask = _candidate_mask(c, args, patterns, full_state)
            if canonical:
                if mask in seen_masks:
                    continue
                seen_masks.add(mask)
            cand_args.append(args)
            cand_constraint.append(c)
            cand_mask.append(mask)

    n = len(cand_args)
    y_all = (1 << (1 << a)) - 1
    pos_shift = [x << a for x in range(1 << m) if target.value_on(x)]
    neg_shift = [x << a for x in range(1 << m) if not target.value_on(x)]

    chosen: list[int] = []

    def accepted(state: int) -> bool:
        return all((state >> s) & y_all == 0 for s in neg_shift)

    def dfs(start: int, depth: int, state: int, introduced: int) -> bool:
        if depth == 0:
            return accepted(state)
        for idx in range(start, n - depth + 1):
            if canonical:
                nxt = _canonical_step(cand_args[idx], m, a, introduced)
                if nxt < 0:
                    continue
            else:
                nxt = 0
            new_state = state & cand_mask[idx]
            if new_state == state:
                continue  # adds nothing; a smaller witness would already exist
            if any((new_state >> s) & y_all == 0 for s in pos_shift):
                continue  # some satisfying target row lost all witnesses
            chosen.append(idx)
            if dfs(idx + 1, depth - 1, new_state, nxt):
                return True
            chosen.pop()
        return False

    def build(indices: list[int]) -> Implementation:
        used_aux = sorted(
            {p - m for idx in indices for p in cand_args[idx] if m <= p < pool}
        )
        apps = []
        for idx in indices:
            args = []
            for p in cand_args[idx]:
                if p < m:
                    args.append(Argument(var=primary[p]))
                elif p < pool:
                    args.append(Argument(var=aux[p - m]))
                else:
                    args.append(Argument(const=p - pool))
            apps.append(ConstraintApplication(cand_constraint[idx], tuple(args)))
        return Implementation(
            target, primary, tuple(aux[i] for i in used_aux), tuple(apps)
        )

    for count in range(0, max_apps + 1):
        chosen.clear()
        if count == 0:
            if not accepted(full_state):
                continue
        elif not dfs(0, count, full_state, 0):
            continue
        impl = build(chosen)
        if not check_implementation(impl):
            raise RuntimeError("search returned a witness that fails verification")
        return impl
    return None
