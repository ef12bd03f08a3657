"""Finitely generated abelian groups over exact Python integers.

A group is a list of cyclic factors: ``0`` stands for a copy of Z and
``d >= 2`` for Z/d. Factor lists need not be in invariant-factor form
(a Cech cochain group is a concatenation of presheaf values); the canonical
form ``d1 | d2 | ... | dk`` followed by zeros is returned by
:meth:`FgAbGroup.canonical`.

Homomorphisms are integer matrices with one row per codomain generator and
one column per domain generator. Entries in a row whose generator has finite
order ``c`` are kept reduced into ``[0, c)``, so equal maps have equal
matrices.

Kernels, images and subquotients go through the Smith normal form with
deterministic pivoting (smallest absolute value, then lowest row, then lowest
column), so every result is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from .errors import (
    CompositionNotZero,
    DoesNotPreserveImage,
    DoesNotPreserveKernel,
    IncompatibleHom,
    IncompatibleShapes,
)

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """``A @ B`` where ``B`` has ``ncols`` columns (needed when ``B`` has no rows)."""
    inner = len(B)
    out = []
    for row in A:
        if len(row) != inner:
            raise IncompatibleShapes(f"cannot multiply: inner dimensions {len(row)} and {inner}")
        acc = [0] * ncols
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(ncols):
                    if bk[j]:
                        acc[j] += a * bk[j]
        out.append(acc)
    return out


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: Sequence[Sequence[int]], ncols: int) -> Matrix:
    return [[A[i][j] for i in range(len(A))] for j in range(ncols)]


# ---------------------------------------------------------------- Smith form


def _snf(M: Sequence[Sequence[int]], m: int, n: int, want: str = "UuVv"):
    """Return ``U, D, V, Uinv, Vinv, rank`` with ``U M V = D``.

    Transforms not named in ``want`` (U, u=Uinv, V, v=Vinv) are not tracked
    and come back as ``None``.
    """
    A = [list(row) for row in M]
    U = identity(m) if "U" in want else None
    Ui = identity(m) if "u" in want else None
    V = identity(n) if "V" in want else None
    Vi = identity(n) if "v" in want else None

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]
            for row in Ui or ():
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V or ():
                row[i], row[j] = row[j], row[i]
            if Vi is not None:
                Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c:
            A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
            if U is not None:
                U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
            for row in Ui or ():
                row[src] -= c * row[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        if c:
            for row in A:
                row[dst] += c * row[src]
            for row in V or ():
                row[dst] += c * row[src]
            if Vi is not None:
                Vi[src] = [a - c * b for a, b in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        if U is not None:
            U[i] = [-a for a in U[i]]
        for row in Ui or ():
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return U, A, V, Ui, Vi, t


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V`` unimodular.

    ``D`` is diagonal with non-negative entries ``d1 | d2 | ...``.
    """
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if m else 0)
    U, D, V, _, _, _ = _snf(M, m, n, "UV")
    return U, D, V


def invariant_factors(M: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if m else 0)
    _, D, _, _, _, r = _snf(M, m, n, "")
    return [D[i][i] for i in range(r)]


def kernel_basis(M: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A Z-basis of ``{x : M x = 0}`` as a list of column vectors."""
    _, _, V, _, _, r = _snf(M, len(M), ncols, "V")
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


class _LatticeSolver:
    """Solves ``K y = x`` for a full-column-rank integer matrix ``K``."""

    def __init__(self, columns: list[list[int]], n: int):
        self.n = n
        self.r = len(columns)
        K = [[columns[j][i] for j in range(self.r)] for i in range(n)]
        P, D, Q, _, _, rank = _snf(K, n, self.r, "UV")
        if rank != self.r:
            raise ValueError("basis columns are linearly dependent")
        self.P, self.Q = P, Q
        self.d = [D[i][i] for i in range(self.r)]

    def solve(self, x: Sequence[int]) -> list[int] | None:
        z = matvec(self.P, x)
        for i in range(self.r, self.n):
            if z[i]:
                return None
        w = []
        for i in range(self.r):
            q, rem = divmod(z[i], self.d[i])
            if rem:
                return None
            w.append(q)
        return matvec(self.Q, w)


# ---------------------------------------------------------------- groups


@dataclass(frozen=True)
class FgAbGroup:
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))
        for d in self.factors:
            if d < 0 or d == 1:
                raise ValueError(f"cyclic factor must be 0 (infinite) or >= 2, got {d}")

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls((0,) * rank)

    @classmethod
    def cyclic(cls, d: int) -> "FgAbGroup":
        return cls(() if d == 1 else (d,))

    @property
    def ngens(self) -> int:
        return len(self.factors)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d == 0)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def order(self) -> int | None:
        """Group order, ``None`` when infinite."""
        return None if self.rank else prod(self.factors)

    def canonical(self) -> "FgAbGroup":
        torsion = [d for d in self.factors if d]
        if len(torsion) > 1:
            diag = [[d if i == j else 0 for j in range(len(torsion))] for i, d in enumerate(torsion)]
            torsion = [d for d in invariant_factors(diag, len(torsion)) if d != 1]
        return FgAbGroup(tuple(torsion) + (0,) * self.rank)

    @property
    def is_canonical(self) -> bool:
        return self.canonical().factors == self.factors

    def to_list(self) -> list[int]:
        return list(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        parts = [f"Z/{d}" for d in self.factors if d]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts)


TRIVIAL = FgAbGroup(())
Z = FgAbGroup((0,))


def groups_isomorphic(A: FgAbGroup, B: FgAbGroup) -> bool:
    return A.canonical() == B.canonical()


def direct_sum(groups: Sequence[FgAbGroup]) -> tuple[FgAbGroup, list[tuple[int, int]]]:
    """Concatenate factor lists; returns the sum and each summand's generator range."""
    factors: list[int] = []
    blocks = []
    for G in groups:
        blocks.append((len(factors), len(factors) + G.ngens))
        factors.extend(G.factors)
    return FgAbGroup(tuple(factors)), blocks


def reduce_vector(G: FgAbGroup, x: Sequence[int]) -> list[int]:
    return [v % d if d else v for v, d in zip(x, G.factors)]


class GroupHom:
    """A homomorphism given by an integer matrix (codomain gens x domain gens)."""

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain: FgAbGroup, codomain: FgAbGroup, matrix: Sequence[Sequence[int]]):
        m, n = codomain.ngens, domain.ngens
        if len(matrix) != m or any(len(row) != n for row in matrix):
            raise IncompatibleShapes(
                f"matrix shape does not match {m} codomain x {n} domain generators",
                witness=(len(matrix), [len(r) for r in matrix]),
            )
        rows = []
        for i, row in enumerate(matrix):
            c = codomain.factors[i]
            rows.append([int(v) % c if c else int(v) for v in row])
        for j, d in enumerate(domain.factors):
            if not d:
                continue
            for i, c in enumerate(codomain.factors):
                if (c and (d * rows[i][j]) % c) or (not c and rows[i][j]):
                    raise IncompatibleHom(
                        f"generator {j} of order {d} cannot map to entry {rows[i][j]} of a factor {c}",
                        witness=(i, j),
                    )
        self.domain = domain
        self.codomain = codomain
        self.matrix = rows

    @classmethod
    def zero(cls, domain: FgAbGroup, codomain: FgAbGroup) -> "GroupHom":
        return cls(domain, codomain, zeros(codomain.ngens, domain.ngens))

    @classmethod
    def identity(cls, G: FgAbGroup) -> "GroupHom":
        return cls(G, G, identity(G.ngens))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupHom)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.matrix == other.matrix
        )

    def __repr__(self) -> str:
        return f"GroupHom({self.domain} -> {self.codomain}, {self.matrix})"

    def apply(self, x: Sequence[int]) -> list[int]:
        return reduce_vector(self.codomain, matvec(self.matrix, x))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``."""
        if inner.codomain != self.domain:
            raise IncompatibleShapes("homomorphisms are not composable")
        return GroupHom(inner.domain, self.codomain, matmul(self.matrix, inner.matrix, inner.domain.ngens))

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise IncompatibleShapes("cannot add homomorphisms with different endpoints")
        return GroupHom(
            self.domain,
            self.codomain,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)],
        )

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, [[-a for a in r] for r in self.matrix])

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)

    def is_isomorphism(self) -> bool:
        """True iff the map is bijective (kernel and cokernel both trivial)."""
        ker = subquotient(self, GroupHom.zero(TRIVIAL, self.domain))
        coker = subquotient(GroupHom.zero(self.codomain, TRIVIAL), self)
        return ker.group.is_trivial and coker.group.is_trivial


def block_hom(domain: FgAbGroup, codomain: FgAbGroup, dom_blocks, cod_blocks, blocks) -> GroupHom:
    """Assemble a hom from ``{(cod_block, dom_block): (sign, GroupHom)}``."""
    M = zeros(codomain.ngens, domain.ngens)
    for (bi, bj), (sign, h) in blocks.items():
        r0, _ = cod_blocks[bi]
        c0, _ = dom_blocks[bj]
        for i, row in enumerate(h.matrix):
            Mi = M[r0 + i]
            for j, v in enumerate(row):
                if v:
                    Mi[c0 + j] += sign * v
    return GroupHom(domain, codomain, M)


# ---------------------------------------------------------------- subquotients


class Subquotient:
    """``ker g / im f`` together with coordinates for its classes.

    ``basis`` is a Z-basis (vectors in Z^n over the generators of the middle
    group B) of the preimage of ``ker g`` in the free cover of B; it contains
    the relations of B. ``generators[i]`` is a representative of the i-th
    canonical generator of ``group``.
    """

    def __init__(self, g: GroupHom, f: GroupHom):
        B = g.domain
        if f.codomain != B:
            raise IncompatibleShapes("codomain of f must be the domain of g")
        gf = g.compose(f)
        if not gf.is_zero():
            col = next(j for j in range(f.domain.ngens) if any(row[j] for row in gf.matrix))
            raise CompositionNotZero(f"g o f is nonzero on generator {col}", witness=col)
        self.g, self.f, self.ambient = g, f, B
        n = B.ngens
        C = g.codomain
        rel_rows = [i for i, c in enumerate(C.factors) if c]
        A = [list(row) + [-C.factors[i] if i == k else 0 for k in rel_rows] for i, row in enumerate(g.matrix)]
        self.basis = [v[:n] for v in kernel_basis(A, n + len(rel_rows))]
        r = len(self.basis)
        self._solver = _LatticeSolver(self.basis, n)

        image = [[f.matrix[i][j] for i in range(n)] for j in range(f.domain.ngens)]
        image += [[b if i == k else 0 for i in range(n)] for k, b in enumerate(B.factors) if b]
        Y_cols = []
        for v in image:
            y = self._solver.solve(v)
            if y is None:  # pragma: no cover - g o f = 0 guarantees membership
                raise CompositionNotZero("image vector outside the kernel lattice", witness=v)
            Y_cols.append(y)
        Y = [[Y_cols[j][i] for j in range(len(Y_cols))] for i in range(r)]
        U, D, _, Ui, _, rank = _snf(Y, r, len(Y_cols), "Uu")
        self._U = U
        self._rows: list[tuple[int, int]] = []  # (row index, modulus or 0)
        for i in range(r):
            d = D[i][i] if i < rank else 0
            if d != 1:
                self._rows.append((i, d))
        self.group = FgAbGroup(tuple(d for _, d in self._rows))
        self.generators = [
            [sum(self.basis[k][t] * Ui[k][i] for k in range(r)) for t in range(n)] for i, _ in self._rows
        ]

    def in_kernel(self, x: Sequence[int]) -> bool:
        return all(v == 0 for v in self.g.apply(x))

    def coords(self, x: Sequence[int]) -> list[int]:
        """Canonical coordinates of the class of ``x`` (which must lie in ``ker g``)."""
        y = self._solver.solve(x)
        if y is None:
            raise DoesNotPreserveKernel("vector does not lie in the kernel", witness=list(x))
        w = matvec(self._U, y)
        return [w[i] % d if d else w[i] for i, d in self._rows]


def subquotient(g: GroupHom, f: GroupHom) -> Subquotient:
    return Subquotient(g, f)


def induced_map(h: GroupHom, src: Subquotient, dst: Subquotient) -> GroupHom:
    """The map ``ker g / im f -> ker g' / im f'`` induced by ``h: B -> B'``."""
    if h.domain != src.ambient or h.codomain != dst.ambient:
        raise IncompatibleShapes("hom does not connect the two middle groups")
    for k, v in enumerate(src.basis):
        if not dst.in_kernel(h.apply(v)):
            raise DoesNotPreserveKernel(f"kernel basis vector {k} leaves the target kernel", witness=k)
    n = src.ambient.ngens
    for j in range(src.f.domain.ngens):
        col = [src.f.matrix[i][j] for i in range(n)]
        if any(dst.coords(h.apply(col))):
            raise DoesNotPreserveImage(f"image generator {j} is not a boundary in the target", witness=j)
    cols = [dst.coords(h.apply(gen)) for gen in src.generators]
    M = [[cols[j][i] for j in range(len(cols))] for i in range(dst.group.ngens)]
    return GroupHom(src.group, dst.group, M)


# ---------------------------------------------------------------- complexes


class IntComplex:
    """Cochain complex ``C^0 -> C^1 -> ...`` with ``differentials[q]: C^q -> C^(q+1)``."""

    def __init__(self, groups: Sequence[FgAbGroup], differentials: Sequence[GroupHom]):
        self.groups = list(groups)
        self.differentials = list(differentials)
        if len(self.differentials) != max(len(self.groups) - 1, 0):
            raise IncompatibleShapes("need one differential between consecutive groups")
        for q, d in enumerate(self.differentials):
            if d.domain != self.groups[q] or d.codomain != self.groups[q + 1]:
                raise IncompatibleShapes(f"differential {q} has wrong endpoints", witness=q)
        for q in range(len(self.differentials) - 1):
            dd = self.differentials[q + 1].compose(self.differentials[q])
            if not dd.is_zero():
                raise CompositionNotZero(f"d^{q + 1} o d^{q} != 0", witness=q)

    def group(self, q: int) -> FgAbGroup:
        return self.groups[q] if 0 <= q < len(self.groups) else TRIVIAL

    def d(self, q: int) -> GroupHom:
        if 0 <= q < len(self.differentials):
            return self.differentials[q]
        return GroupHom.zero(self.group(q), self.group(q + 1))

    def cohomology(self, q: int) -> Subquotient:
        return subquotient(self.d(q), self.d(q - 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * G.rank for q, G in enumerate(self.groups))
