"""Pointed rational polyhedral cones with exact dual descriptions.

A cone is created from integer generators; facet inequalities, extreme
rays, pointedness, and duals are derived with an exact double description
method.  Vertex enumeration of lattice polyhedra with a recession cone is
done by homogenization: points p lift to (p, 1), recession rays r lift to
(r, 0), and vertices are read off the extreme rays of the lifted cone.
"""

import threading
from collections.abc import Iterable, Sequence

from .errors import InputError, NotFullRankError, NotPointedError
from .linalg import (
    IntMatrix,
    Vector,
    dot,
    hermite_normal_form,
    determinant,
    make_primitive,
    rank,
    vec_sub,
)


def _normalize_columns(generators) -> tuple[Vector, ...]:
    if isinstance(generators, IntMatrix):
        cols = generators.columns()
    else:
        cols = tuple(tuple(int(x) for x in c) for c in generators)
    if not cols:
        raise InputError("a cone needs at least one generator")
    n = len(cols[0])
    if n < 1 or any(len(c) != n for c in cols):
        raise InputError("generators must be nonempty vectors of equal length")
    out = []
    for c in cols:
        if not any(c):
            raise InputError("zero vector is not a valid cone generator")
        out.append(make_primitive(c))
    return tuple(sorted(set(out)))


def dual_description(
    ineq_rows: Iterable[Sequence[int]], n: int
) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    """Minimal generator description of {x in R^n : a . x >= 0 for all a}.

    Returns (lineality_basis, extreme_rays): the cone is the linear span of
    the lineality basis plus the nonnegative span of the rays, the rays
    being extreme modulo the lineality space.  All vectors are primitive
    integer vectors; the output is sorted and deterministic.

    Standard double description: start from all of R^n (lineality = the
    standard basis) and insert one inequality at a time.  While the new
    inequality cuts the lineality space, one lineality vector turns into a
    ray and the rest are projected onto the hyperplane.  Afterwards rays
    are split by sign and adjacent (+,-) pairs are combined; adjacency is
    the usual combinatorial test on sets of tight inequalities.
    """
    rows = []
    seen = set()
    for a in ineq_rows:
        t = tuple(int(x) for x in a)
        if len(t) != n:
            raise InputError("inequality row has wrong length")
        if not any(t):
            continue
        t = make_primitive(t)
        if t not in seen:
            seen.add(t)
            rows.append(t)
    # Degeneracy-robust insertion order: few nonzero entries first.
    rows.sort(key=lambda t: (sum(1 for x in t if x), t))

    lineality = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays: list[tuple[Vector, int]] = []  # (vector, tight bitmask)

    for k, a in enumerate(rows):
        evals = [dot(a, l) for l in lineality]
        if any(evals):
            idx = min(
                (i for i, e in enumerate(evals) if e), key=lambda i: abs(evals[i])
            )
            pivot = lineality[idx]
            ev_p = evals[idx]
            if ev_p < 0:
                pivot = tuple(-x for x in pivot)
                ev_p = -ev_p
            new_lin = []
            for i, l in enumerate(lineality):
                if i == idx:
                    continue
                e = dot(a, l)
                if e == 0:
                    new_lin.append(l)
                else:
                    new_lin.append(
                        make_primitive(
                            tuple(ev_p * x - e * y for x, y in zip(l, pivot))
                        )
                    )
            new_rays = []
            for v, mask in rays:
                e = dot(a, v)
                if e == 0:
                    new_rays.append((v, mask | (1 << k)))
                else:
                    w = make_primitive(
                        tuple(ev_p * x - e * y for x, y in zip(v, pivot))
                    )
                    new_rays.append((w, mask | (1 << k)))
            new_rays.append((pivot, (1 << k) - 1))
            lineality = new_lin
            rays = new_rays
            continue

        plus, zero, minus = [], [], []
        for v, mask in rays:
            e = dot(a, v)
            if e > 0:
                plus.append((v, mask, e))
            elif e == 0:
                zero.append((v, mask | (1 << k)))
            else:
                minus.append((v, mask, e))
        if not minus:
            rays = [(v, m) for v, m, _ in plus] + zero
            continue
        combos = []
        for vp, mp, ep in plus:
            for vm, mm, em in minus:
                common = mp & mm
                adjacent = True
                for v, m in rays:
                    if v is vp or v is vm:
                        continue
                    if common & m == common:
                        adjacent = False
                        break
                if adjacent:
                    w = make_primitive(
                        tuple(ep * x - em * y for x, y in zip(vm, vp))
                    )
                    combos.append((w, common | (1 << k)))
        rays = [(v, m) for v, m, _ in plus] + zero + combos

    lin_out: tuple[Vector, ...] = ()
    if lineality:
        H, _ = hermite_normal_form(IntMatrix(lineality))
        lin_out = tuple(make_primitive(r) for r in H.data if any(r))
    ray_out = tuple(sorted({v for v, _ in rays}))
    return lin_out, ray_out


class Cone:
    """Rational polyhedral cone in Z^n given by integer generators.

    Generators are primitivized and deduplicated on construction; the
    extreme rays, facet normals and lineality space are computed lazily
    and cached (cache access is serialized, cones are otherwise
    immutable and safe to share between threads).
    """

    __slots__ = ("_gens", "_n", "_lock", "_cache")

    def __init__(self, generators):
        self._gens = _normalize_columns(generators)
        self._n = len(self._gens[0])
        self._lock = threading.RLock()
        self._cache: dict = {}

    @classmethod
    def from_generators(cls, generators) -> "Cone":
        return cls(generators)

    @classmethod
    def unimodular(cls, n: int) -> "Cone":
        return cls(IntMatrix.identity(n))

    @property
    def ambient_rank(self) -> int:
        return self._n

    @property
    def generators(self) -> tuple[Vector, ...]:
        """The primitive deduplicated input generators (possibly redundant)."""
        return self._gens

    def _cached(self, key, compute):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    # -- dual description ------------------------------------------------

    def _dual_data(self):
        """(equalities, facet_rows): the cone is {x : F x >= 0, E x = 0}."""

        def compute():
            lin, facet_rays = dual_description(self._gens, self._n)
            return lin, facet_rays

        return self._cached("dual", compute)

    @property
    def facet_normals(self) -> tuple[Vector, ...]:
        """Primitive inward facet normals (for a full-dimensional cone this
        is the complete minimal inequality description)."""
        return self._dual_data()[1]

    @property
    def span_equalities(self) -> tuple[Vector, ...]:
        """Normals vanishing on the cone; empty iff full-dimensional."""
        return self._dual_data()[0]

    @property
    def facet_matrix(self) -> IntMatrix:
        eq, fac = self._dual_data()
        rows = list(fac) + [r for e in eq for r in (e, tuple(-x for x in e))]
        return IntMatrix(rows)

    @property
    def generator_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.rays)

    # -- structural predicates -------------------------------------------

    def is_full_dimensional(self) -> bool:
        return rank(self._gens) == self._n

    def is_pointed(self) -> bool:
        eq, fac = self._dual_data()
        return rank(list(fac) + list(eq)) == self._n

    def is_simplicial(self) -> bool:
        return self.is_pointed() and len(self.rays) == self._n

    def is_unimodular(self) -> bool:
        if not self.is_pointed():
            return False
        r = self.rays
        if len(r) != self._n:
            return False
        return abs(determinant(IntMatrix.from_columns(r))) == 1

    # -- extreme rays ------------------------------------------------------

    @property
    def rays(self) -> tuple[Vector, ...]:
        """Extreme rays (for pointed cones).  For a cone with lineality,
        the extreme rays modulo the lineality space."""

        def compute():
            eq, fac = self._dual_data()
            if rank(list(fac) + list(eq)) == self._n:
                # Pointed: keep generators whose tight facets have rank n-1.
                out = []
                for g in self._gens:
                    tight = [f for f in fac if dot(f, g) == 0]
                    tight.extend(eq)
                    if rank(tight) == self._n - 1:
                        out.append(g)
                return tuple(sorted(out))
            ineqs = list(fac) + [r for e in eq for r in (e, tuple(-x for x in e))]
            _, r = dual_description(ineqs, self._n)
            return r

        return self._cached("rays", compute)

    def contains(self, v: Sequence[int]) -> bool:
        eq, fac = self._dual_data()
        v = tuple(v)
        return all(dot(f, v) >= 0 for f in fac) and all(dot(e, v) == 0 for e in eq)

    def dual(self) -> "Cone":
        """The dual cone {y : <y, x> >= 0 for all x in the cone}."""

        def compute():
            eq, fac = self._dual_data()
            gens = list(fac) + [r for e in eq for r in (e, tuple(-x for x in e))]
            d = Cone(gens)
            if self.is_pointed() and not eq:
                # Pointed and full-dimensional: each description is the
                # other's, so prime the caches both ways.
                d._cache.setdefault("dual", ((), self.rays))
                d._cache.setdefault("rays", tuple(sorted(fac)))
                d._cache.setdefault("_dual_cone", self)
            return d

        return self._cached("_dual_cone", compute)

    def grading(self) -> Vector:
        """Sum of the facet normals: strictly positive on the cone minus
        the origin when the cone is pointed."""
        if not self.is_pointed():
            raise NotPointedError("grading needs a pointed cone")
        eq, fac = self._dual_data()
        rows = list(fac) + list(eq)
        return tuple(sum(col) for col in zip(*rows))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cone)
            and self._n == other._n
            and self.rays == other.rays
            and self.span_equalities == other.span_equalities
        )

    def __hash__(self) -> int:
        return hash((self._n, self.rays))

    def __repr__(self) -> str:
        cols = ", ".join(str(list(g)) for g in self._gens)
        return f"Cone([{cols}])"


def cone_from_generators(G) -> Cone:
    return Cone(G)


def dual_cone(C: Cone) -> Cone:
    return C.dual()


def is_pointed(C: Cone) -> bool:
    return C.is_pointed()


def is_full_dimensional(C: Cone) -> bool:
    return C.is_full_dimensional()


def is_simplicial(C: Cone) -> bool:
    return C.is_simplicial()


def is_unimodular_cone(C: Cone) -> bool:
    return C.is_unimodular()


def contains(C: Cone, v: Sequence[int]) -> bool:
    return C.contains(v)


class LatticePolyhedron:
    """Conv(points) + recession cone, all data on the integer lattice.

    A recession of None means the bounded case (trivial recession cone).
    """

    __slots__ = ("points", "recession", "_vertices")

    def __init__(self, points: Iterable[Sequence[int]], recession: Cone | None):
        pts = tuple(sorted({tuple(int(x) for x in p) for p in points}))
        if not pts:
            raise InputError("a lattice polyhedron needs at least one point")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise InputError("points must have equal length")
        if recession is not None:
            if recession.ambient_rank != n:
                raise InputError("recession cone rank mismatch")
            if not recession.is_pointed():
                raise NotPointedError("recession cone must be pointed")
        self.points = pts
        self.recession = recession
        self._vertices = None

    @property
    def ambient_rank(self) -> int:
        return len(self.points[0])

    def lifted_cone(self) -> Cone:
        gens = [p + (1,) for p in self.points]
        if self.recession is not None:
            gens.extend(r + (0,) for r in self.recession.rays)
        return Cone(gens)

    def vertices(self) -> tuple[Vector, ...]:
        if self._vertices is None:
            lifted = self.lifted_cone()
            self._vertices = tuple(
                sorted(r[:-1] for r in lifted.rays if r[-1] == 1)
            )
        return self._vertices

    def contains(self, p: Sequence[int]) -> bool:
        """Exact membership of a lattice point (as a point of the real
        polyhedron), via the homogenization cone."""
        return self.lifted_cone().contains(tuple(p) + (1,))

    def __repr__(self) -> str:
        return f"LatticePolyhedron({len(self.points)} points, rec={self.recession!r})"


def polyhedron_vertices(P: LatticePolyhedron) -> tuple[Vector, ...]:
    return P.vertices()


def feasible_cone(v: Sequence[int], P: LatticePolyhedron) -> Cone:
    """Cone(P - v) at a vertex v of P."""
    v = tuple(int(x) for x in v)
    if v not in P.vertices():
        raise InputError(f"{v} is not a vertex of the polyhedron")
    gens = [vec_sub(p, v) for p in P.points if p != v]
    if P.recession is not None:
        gens.extend(P.recession.rays)
    if not gens:
        raise InputError("feasible cone of a single bounded point is trivial")
    return Cone(gens)
