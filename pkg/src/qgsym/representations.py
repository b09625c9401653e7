"""Block bi-unitary representations of the automorphism game algebra and the
relation verifier.

A representation for the graph pair (g1, g2) is an n x n grid of d x d
blocks u[a, x] (row index a = output vertex in g2, column index x = input
vertex in g1) such that

* the flattened nd x nd matrix and its block transpose are both unitary
  ("bi-unitary"), and
* u[a, x] @ u[b, y]* = 0 whenever exactly one of "a ~ b in g2" and
  "x ~ y in g1" holds, with the convention that no vertex is adjacent to
  itself.

The verifier reports these relations plus their consequences: blocks
between vertices of different degree vanish, and on complete graphs every
block is a partial isometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotMagicUnitary,
    NotUnitModulus,
    NotUnitary,
    PreconditionFailed,
    RelationViolated,
)
from .graphs import Graph, validate_permutation
from .linalg import (
    DEFAULT_TOL,
    Check,
    Matrix,
    Report,
    Tolerance,
    frobenius,
    is_partial_isometry,
    is_projection,
    is_unitary,
)

PATH3_CANONICAL = Graph.from_edges(3, [(0, 1), (0, 2)])   # center vertex 0
K1K2_CANONICAL = Graph.from_edges(3, [(1, 2)])            # vertex 0 isolated


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BlockBiUnitary:
    """n x n grid of d x d complex blocks, stored as an (n, n, d, d) array.

    blocks[a, x] is the block in block-row a, block-column x.  The class
    does not enforce bi-unitarity on construction; use
    :meth:`biunitarity_residual` or the representation verifier.
    """

    blocks: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=complex)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise DimensionMismatch(f"block grid must have shape (n, n, d, d), got {b.shape}")
        object.__setattr__(self, "blocks", _frozen(b))

    @classmethod
    def from_block_rows(cls, rows: Sequence[Sequence[Matrix]]) -> "BlockBiUnitary":
        return cls(np.array([[np.asarray(m, dtype=complex) for m in row] for row in rows]))

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def d(self) -> int:
        return self.blocks.shape[2]

    def block(self, a: int, x: int) -> np.ndarray:
        return self.blocks[a, x]

    def flatten(self) -> np.ndarray:
        n, d = self.n, self.d
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)

    def block_transpose(self) -> "BlockBiUnitary":
        return BlockBiUnitary(self.blocks.transpose(1, 0, 2, 3))

    def biunitarity_residual(self) -> float:
        u = self.flatten()
        ut = self.block_transpose().flatten()
        eye = np.eye(u.shape[0])
        return max(
            frobenius(u.conj().T @ u - eye),
            frobenius(u @ u.conj().T - eye),
            frobenius(ut.conj().T @ ut - eye),
            frobenius(ut @ ut.conj().T - eye),
        )


@dataclass(frozen=True)
class Representation:
    """A block bi-unitary tied to a graph pair (input side g1, output side g2)."""

    g1: Graph
    g2: Graph
    u: BlockBiUnitary
    label: str = ""

    def __post_init__(self):
        if not (self.g1.n == self.g2.n == self.u.n):
            raise DimensionMismatch(
                f"graph sizes ({self.g1.n}, {self.g2.n}) and block grid size {self.u.n} disagree"
            )

    @property
    def n(self) -> int:
        return self.u.n

    @property
    def d(self) -> int:
        return self.u.d


@dataclass(frozen=True)
class MagicUnitaryData:
    """Normaliser unitaries and the projection grid extracted from a
    complete-graph representation.

    normalizers[a] is the unitary v_a = sum_x u[a, x]*; projections[a, x]
    is p_{a,x} = v_a @ u[a, x] = u[a, x]* @ u[a, x].  The grid is a magic
    unitary: every row and column of projections sums to the identity.
    """

    normalizers: np.ndarray   # (n, d, d)
    projections: np.ndarray   # (n, n, d, d)

    def __post_init__(self):
        object.__setattr__(self, "normalizers", _frozen(np.asarray(self.normalizers, dtype=complex)))
        object.__setattr__(self, "projections", _frozen(np.asarray(self.projections, dtype=complex)))

    @property
    def n(self) -> int:
        return self.projections.shape[0]

    def chain_unitaries(self) -> list[np.ndarray]:
        """The n-1 products v_a @ v_{a+1}* linking consecutive normalisers."""
        v = self.normalizers
        return [v[a] @ v[a + 1].conj().T for a in range(self.n - 1)]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _mismatch_mask(g1: Graph, g2: Graph) -> np.ndarray:
    """mask[a, b, x, y] = True where the orthogonality relations demand
    u[a, x] u[b, y]* = 0, i.e. adjacency of (a, b) in g2 and of (x, y) in g1
    disagree (diagonal pairs count as non-adjacent)."""
    a2 = g2.adjacency_matrix.astype(bool)
    a1 = g1.adjacency_matrix.astype(bool)
    return a2[:, :, None, None] ^ a1[None, None, :, :]


def block_product_norms(u: BlockBiUnitary) -> np.ndarray:
    """norms[a, x, b, y] = || u[a, x] @ u[b, y]* ||_F."""
    b = u.blocks
    prod = np.einsum("axij,bykj->axbyik", b, b.conj())
    return np.sqrt(np.sum(np.abs(prod) ** 2, axis=(4, 5)))


def verify_representation(rep: Representation, tol: Tolerance = DEFAULT_TOL) -> Report:
    """Check a block bi-unitary against the game relations of (g1, g2).

    Report contents:
      1. bi-unitarity of the flattened matrix and its block transpose;
      2. the orthogonality relations u[a,x] u[b,y]* = 0 on every
         adjacency-mismatched index combination;
      3. (derived) u[a,x] = 0 whenever deg(x) in g1 differs from deg(a) in
         g2 -- implied by 1+2, so a failure here with 1+2 passing flags an
         inconsistency;
      4. when both graphs are complete, every block is a partial isometry
         (equivalent to the relations on complete graphs).
    """
    n = rep.n
    checks: list[Check] = []

    res_bi = rep.u.biunitarity_residual()
    checks.append(Check("bi-unitarity", res_bi <= tol.eps_eq, res_bi))

    norms = block_product_norms(rep.u)                      # (a, x, b, y)
    mism = _mismatch_mask(rep.g1, rep.g2)                   # (a, b, x, y)
    masked = norms.transpose(0, 2, 1, 3)[mism]              # align to (a, b, x, y)
    res_orth = float(masked.max()) if masked.size else 0.0
    detail = ""
    if masked.size and res_orth > tol.eps_eq:
        idx = np.unravel_index(
            int(np.argmax(np.where(mism, norms.transpose(0, 2, 1, 3), -1.0))), mism.shape
        )
        a, b, x, y = (int(i) for i in idx)
        detail = f"worst at (a,b,x,y) = ({a + 1},{b + 1},{x + 1},{y + 1}) [1-based]"
    checks.append(Check("orthogonality relations", res_orth <= tol.eps_eq, res_orth, detail=detail))

    deg1 = np.array(rep.g1.degrees())
    deg2 = np.array(rep.g2.degrees())
    block_norms = np.sqrt(np.sum(np.abs(rep.u.blocks) ** 2, axis=(2, 3)))  # (a, x)
    degree_mism = deg2[:, None] != deg1[None, :]
    res_deg = float(block_norms[degree_mism].max()) if degree_mism.any() else 0.0
    checks.append(
        Check(
            "degree support (derived)",
            res_deg <= tol.eps_eq,
            res_deg,
            kind="derived",
            detail="blocks between vertices of different degree must vanish",
        )
    )

    complete = len(rep.g1.edges) == n * (n - 1) // 2 and len(rep.g2.edges) == n * (n - 1) // 2
    if complete:
        res_pi = max(
            is_partial_isometry(rep.u.blocks[a, x], tol).residual
            for a in range(n)
            for x in range(n)
        )
        checks.append(
            Check("blocks are partial isometries (complete graphs)", res_pi <= tol.eps_eq, res_pi)
        )

    return Report(f"representation check ({rep.label or 'unlabelled'})", tuple(checks))


def require_verified(rep: Representation, tol: Tolerance = DEFAULT_TOL) -> Report:
    report = verify_representation(rep, tol)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise PreconditionFailed(f"representation fails verification: {names}")
    return report


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def _matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1.0
    return m


def build_k3_matrix_units() -> Representation:
    """The permutation-style representation of the 3-vertex complete graph
    whose blocks are 3x3 matrix units; the flattened 9x9 matrix is a
    classical permutation matrix.
    """
    e = _matrix_unit
    rows = [
        [e(3, 0, 0), e(3, 1, 2), e(3, 2, 1)],
        [e(3, 1, 1), e(3, 2, 0), e(3, 0, 2)],
        [e(3, 2, 2), e(3, 0, 1), e(3, 1, 0)],
    ]
    k3 = Graph.complete(3)
    return Representation(k3, k3, BlockBiUnitary.from_block_rows(rows), "k3-matrix-units")


def mercedes_unitaries() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Three real symmetric involutions at mutual angle 120 degrees.

    They satisfy r1 + r2 + r3 = 0, r_i**2 = I and r1 r2 = r2 r3, and are,
    up to unitary equivalence, the unique irreducible triple of self-adjoint
    unitaries summing to zero.
    """
    s = np.sqrt(3.0) / 2.0
    r1 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    r2 = np.array([[-0.5, s], [s, 0.5]], dtype=complex)
    r3 = np.array([[-0.5, -s], [-s, 0.5]], dtype=complex)
    return r1, r2, r3


def build_mercedes_p3() -> Representation:
    """Two-dimensional representation for the 3-vertex path (center = 0).

    The unitary block for the center is the identity; the 2x2 corner grid on
    the endpoints is (1/sqrt2) [[r1, r2], [r2, -r3]] built from the three
    involutions of :func:`mercedes_unitaries`.
    """
    r1, r2, r3 = mercedes_unitaries()
    z = np.zeros((2, 2), dtype=complex)
    s = 1.0 / np.sqrt(2.0)
    rows = [
        [np.eye(2, dtype=complex), z, z],
        [z, s * r1, s * r2],
        [z, s * r2, -s * r3],
    ]
    g = PATH3_CANONICAL
    return Representation(g, g, BlockBiUnitary.from_block_rows(rows), "mercedes-p3")


def build_k1k2() -> Representation:
    """Two-dimensional representation for K1 u K2 (vertex 0 isolated,
    edge {1, 2})."""
    z = np.zeros((2, 2), dtype=complex)
    swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    p = np.diag([1.0, 0.0]).astype(complex)
    q = np.diag([0.0, 1.0]).astype(complex)
    rows = [
        [swap, z, z],
        [z, p, q],
        [z, q, p],
    ]
    g = K1K2_CANONICAL
    return Representation(g, g, BlockBiUnitary.from_block_rows(rows), "k1k2")


def build_k2_onedim(z: complex, kind: str = "diagonal") -> Representation:
    """One-dimensional representation of the 2-vertex complete graph.

    kind "diagonal" puts (1, z) on the diagonal blocks; "antidiagonal" puts
    (1, z) on the off-diagonal blocks.  z must have unit modulus.
    """
    z = complex(z)
    if abs(abs(z) - 1.0) > DEFAULT_TOL.eps_eq:
        raise NotUnitModulus(f"|z| must be 1, got |{z}| = {abs(z)}")
    one = np.array([[1.0 + 0j]])
    zz = np.array([[z]])
    zero = np.zeros((1, 1), dtype=complex)
    if kind == "diagonal":
        rows = [[one, zero], [zero, zz]]
    elif kind == "antidiagonal":
        rows = [[zero, one], [zz, zero]]
    else:
        raise ValueError(f"kind must be 'diagonal' or 'antidiagonal', got {kind!r}")
    k2 = Graph.complete(2)
    return Representation(k2, k2, BlockBiUnitary.from_block_rows(rows), f"k2-onedim-{kind}")


def build_diagonal(g: Graph, unitaries: Sequence[Matrix], tol: Tolerance = DEFAULT_TOL) -> Representation:
    """Diagonal representation u[a, x] = delta_{a,x} v_a for any graph g.

    The orthogonality relations hold vacuously on diagonal supports (a
    nonzero product forces a = x and b = y, which never mismatch), so this
    is a valid representation of the game algebra of every simple graph on
    n vertices.
    """
    if len(unitaries) != g.n:
        raise DimensionMismatch(f"need {g.n} unitaries, got {len(unitaries)}")
    vs = [np.asarray(v, dtype=complex) for v in unitaries]
    d = vs[0].shape[0]
    for i, v in enumerate(vs):
        check = is_unitary(v, tol)
        if v.shape != (d, d) or not check.ok:
            raise NotUnitary(f"entry {i} is not a {d}x{d} unitary (residual {check.residual:.3e})")
    blocks = np.zeros((g.n, g.n, d, d), dtype=complex)
    for a in range(g.n):
        blocks[a, a] = vs[a]
    return Representation(g, g, BlockBiUnitary(blocks), "diagonal")


def assemble_from_generators(
    projection_grid: Sequence[Sequence[Matrix]],
    unitaries: Sequence[Matrix],
    tol: Tolerance = DEFAULT_TOL,
    label: str = "assembled",
) -> Representation:
    """Build a complete-graph representation from magic-unitary generators.

    Input: an n x n grid p[a][x] of projections with unit row and column
    sums, and n-1 unitaries w[0..n-2] subject to the chain relations

        p[b][x] @ (w[b] w[b+1] ... w[a-1]) @ p[a][x] = 0   for all b < a, x.

    Output: the representation with normalisers v_0 = I,
    v_a = w[a-1]* ... w[0]* and blocks u[a, x] = v_a* @ p[a][x].  The fixed
    choice v_0 = I makes the construction deterministic; any other unitary
    prefix gives an equivalent representation.
    """
    n = len(projection_grid)
    p = [[np.asarray(m, dtype=complex) for m in row] for row in projection_grid]
    d = p[0][0].shape[0]
    if any(len(row) != n for row in p):
        raise DimensionMismatch("projection grid must be square")
    if len(unitaries) != n - 1:
        raise DimensionMismatch(f"need {n - 1} unitaries for an {n}x{n} grid, got {len(unitaries)}")
    ws = [np.asarray(w, dtype=complex) for w in unitaries]

    eye = np.eye(d)
    worst = 0.0
    for a in range(n):
        for x in range(n):
            worst = max(worst, is_projection(p[a][x], tol).residual)
    for x in range(n):
        worst = max(worst, frobenius(sum(p[a][x] for a in range(n)) - eye))
    for a in range(n):
        worst = max(worst, frobenius(sum(p[a][x] for x in range(n)) - eye))
    if worst > tol.eps_eq:
        raise NotMagicUnitary(f"projection grid is not a magic unitary (residual {worst:.3e})")
    for i, w in enumerate(ws):
        check = is_unitary(w, tol)
        if not check.ok:
            raise NotUnitary(f"chain unitary {i} fails unitarity (residual {check.residual:.3e})")

    # chain relations p_b (w_b ... w_{a-1}) p_a = 0 for b < a
    for b in range(n):
        prod = eye.copy()
        for a in range(b + 1, n):
            prod = prod @ ws[a - 1]
            for x in range(n):
                res = frobenius(p[b][x] @ prod @ p[a][x])
                if res > tol.eps_eq:
                    raise RelationViolated(
                        f"generator relation fails at (b, a, x) = ({b + 1}, {a + 1}, {x + 1}) "
                        f"[1-based], residual {res:.3e}",
                        indices=(b, a, x),
                        residual=res,
                    )

    v = [np.eye(d, dtype=complex)]
    for a in range(1, n):
        v.append(ws[a - 1].conj().T @ v[a - 1])
    blocks = np.zeros((n, n, d, d), dtype=complex)
    for a in range(n):
        va_star = v[a].conj().T
        for x in range(n):
            blocks[a, x] = va_star @ p[a][x]
    kn = Graph.complete(n)
    return Representation(kn, kn, BlockBiUnitary(blocks), label)


def extract_magic_unitary(rep: Representation, tol: Tolerance = DEFAULT_TOL) -> MagicUnitaryData:
    """Recover the normalisers and projection grid of a complete-graph
    representation: v_a = sum_x u[a, x]* and p_{a,x} = v_a u[a, x].

    Requires rep to verify for the complete graph pair.  The round trip
    through :func:`assemble_from_generators` with the extracted grid and
    chain unitaries reproduces the projection grid exactly.
    """
    n, d = rep.n, rep.d
    if len(rep.g1.edges) != n * (n - 1) // 2 or len(rep.g2.edges) != n * (n - 1) // 2:
        raise PreconditionFailed("magic-unitary extraction needs complete graphs on both sides")
    require_verified(rep, tol)

    v = np.zeros((n, d, d), dtype=complex)
    p = np.zeros((n, n, d, d), dtype=complex)
    for a in range(n):
        v[a] = sum(rep.u.blocks[a, x].conj().T for x in range(n))
        check = is_unitary(v[a], tol)
        if not check.ok:
            raise PreconditionFailed(
                f"normaliser {a + 1} [1-based] is not unitary (residual {check.residual:.3e})"
            )
        for x in range(n):
            p[a, x] = v[a] @ rep.u.blocks[a, x]
    return MagicUnitaryData(v, p)


def build_free_group_rep(n: int, unitaries: Sequence[Matrix], tol: Tolerance = DEFAULT_TOL) -> Representation:
    """Complete-graph representation with Kronecker projection grid
    p[a][x] = delta_{a,x} I and the given n-1 chain unitaries.

    The chain relations hold automatically on the Kronecker grid, so any
    tuple of unitaries is admissible: words in the chain unitaries are
    unconstrained, which is the mechanism making the complete-graph game
    algebra noncommutative for n >= 3.
    """
    ws = [np.asarray(w, dtype=complex) for w in unitaries]
    if len(ws) != n - 1:
        raise DimensionMismatch(f"need {n - 1} unitaries, got {len(ws)}")
    d = ws[0].shape[0] if ws else 1
    for i, w in enumerate(ws):
        check = is_unitary(w, tol)
        if not check.ok:
            raise NotUnitary(f"unitary {i} fails unitarity (residual {check.residual:.3e})")
    eye = np.eye(d, dtype=complex)
    grid = [[eye if a == x else np.zeros((d, d), dtype=complex) for x in range(n)] for a in range(n)]
    return assemble_from_generators(grid, ws, tol, label="free-group")


def relabel_representation(rep: Representation, perm: Sequence[int]) -> Representation:
    """Representation with vertex v renamed to perm[v] on both sides.

    Blocks move with the vertices: the new block at (perm[a], perm[x]) is
    the old block at (a, x), and both graphs are relabelled the same way,
    so the orthogonality relations are preserved verbatim.
    """
    p = validate_permutation(perm, rep.n)
    blocks = np.zeros_like(rep.u.blocks)
    for a in range(rep.n):
        for x in range(rep.n):
            blocks[p[a], p[x]] = rep.u.blocks[a, x]
    return Representation(
        rep.g1.relabel(p),
        rep.g2.relabel(p),
        BlockBiUnitary(blocks),
        rep.label,
    )


def degree_two_word(rep: Representation, a: int, x: int, b: int, y: int) -> np.ndarray:
    """The d x d value of u[a, x]* @ u[b, y]."""
    return rep.u.blocks[a, x].conj().T @ rep.u.blocks[b, y]
