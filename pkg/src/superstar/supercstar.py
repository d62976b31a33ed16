"""Hilbert-superspace structure, superadjoint, and graded C*-checks.

The fundamental symmetry J acts as the Hodge exchange on the odd monomial
factor and as the identity on the even factor; the indefinite pairing is
<x, y> = (J x, y) with (, ) the standard positive product of the
orthonormal truncated basis.  The superadjoint of a homogeneous operator
is defined by <T^dag x, y> = (-1)^{|T||x|} <x, T y> and realized both from
that pairing and through the blockwise J-conjugation closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grassmann import parity, sign_eps
from .params import DeformationParams
from .quantization import SuperOperator, TruncatedBasis


@dataclass
class HilbertSuper:
    basis: TruncatedBasis
    grading: np.ndarray      # parity of each basis vector
    j_matrix: np.ndarray
    parity_j: int

    @property
    def dimension(self) -> int:
        return self.j_matrix.shape[0]

    @property
    def gram(self) -> np.ndarray:
        """S with <x, y> = x^H S y; S = J^H for real orthogonal J."""
        return self.j_matrix.conj().T

    def pairing(self, x, y) -> complex:
        return complex(np.asarray(x).conj() @ self.gram @ np.asarray(y))


def _hodge_matrix(n: int) -> np.ndarray:
    dim = 1 << n
    full = dim - 1
    out = np.zeros((dim, dim))
    for i_bits in range(dim):
        out[full ^ i_bits, i_bits] = sign_eps(i_bits, full ^ i_bits)
    return out


def make_hilbert_super(basis: TruncatedBasis) -> HilbertSuper:
    n = basis.n
    j = np.kron(_hodge_matrix(n), np.eye(basis.even_size))
    grading = basis.parity_vector()
    h = HilbertSuper(basis, grading, j, n % 2)
    # construction-time invariants
    if not np.allclose(j.T @ j, np.eye(h.dimension), atol=1e-12):
        raise ArithmeticError("J is not unitary")
    pj = h.parity_j
    for i in range(h.dimension):
        col = j[:, i]
        tgt = (grading[i] + pj) % 2
        if np.any((grading != tgt) & (np.abs(col) > 1e-12)):
            raise ArithmeticError("J is not homogeneous of degree n mod 2")
    j2 = j @ j
    expect = np.diag([(-1.0) ** (((pj + 1) * grading[i]) % 2)
                      for i in range(h.dimension)])
    if not np.allclose(j2, expect, atol=1e-12):
        raise ArithmeticError("J^2 does not satisfy the parity rule")
    return h


def _parity_blocks(h: HilbertSuper, mat: np.ndarray):
    """Split into homogeneous parts: degree 0 and degree 1."""
    g = h.grading
    same = (g[:, None] == g[None, :])
    return {0: mat * same, 1: mat * (~same)}


def superadjoint(h: HilbertSuper, t: SuperOperator) -> SuperOperator:
    """Pairing-defined superadjoint, inhomogeneous input split by degree."""
    if set(t.comps) - {0}:
        raise ValueError("superadjoint expects an auxiliary-free operator")
    s = h.gram
    s_invH = np.linalg.inv(s.conj().T)
    out = np.zeros_like(t.body())
    for deg, part in _parity_blocks(h, t.body()).items():
        if not np.any(part):
            continue
        # <T^dag x, y> = (-1)^{deg |x|} <x, T y> for x of parity p means
        # (T^dag)^H S = D S T, i.e. T^dag = S^{-H} T^H S^H D, with
        # D = diag((-1)^{deg p_i}) on the x index
        d = np.where((h.grading * deg) % 2 == 1, -1.0, 1.0)
        out = out + (s_invH @ part.conj().T @ s.conj().T) * d[None, :]
    return SuperOperator.from_matrix(t.basis, out)


def superadjoint_closed_form(h: HilbertSuper, t: SuperOperator) -> SuperOperator:
    """(-1)^{(p_J+1)(|T|+|x|)+|T||x|} J T* J, realized blockwise."""
    if set(t.comps) - {0}:
        raise ValueError("superadjoint expects an auxiliary-free operator")
    j = h.j_matrix
    pj = h.parity_j
    out = np.zeros_like(t.body())
    for deg, part in _parity_blocks(h, t.body()).items():
        if not np.any(part):
            continue
        m = j @ part.conj().T @ j
        signs = np.array([(-1.0) ** (((pj + 1) * (deg + px) + deg * px) % 2)
                          for px in h.grading])
        out = out + m * signs[None, :]
    return SuperOperator.from_matrix(t.basis, out)


def operator_degree(h: HilbertSuper, t: SuperOperator) -> int | None:
    """Degree of a homogeneous auxiliary-free operator, else None."""
    blocks = _parity_blocks(h, t.body())
    nz = [d for d, b in blocks.items() if np.abs(b).max() > 1e-13]
    return nz[0] if len(nz) == 1 else (0 if not nz else None)


def left_mult_odd_example() -> dict:
    """L^infty(R^{0|1}) acting by left multiplication on Lambda(xi):
    the superinvolution preserves the algebra, the plain adjoint does not."""
    basis = TruncatedBasis(2, 1, 1, 1.0)
    h = make_hilbert_super(basis)
    # L_xi on the basis {1, xi}
    l_xi = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)

    def is_left_mult(m):
        # left multiplications by a + b xi: [[a, 0], [b, a]]
        return abs(m[0, 1]) < 1e-12 and abs(m[0, 0] - m[1, 1]) < 1e-12

    t = SuperOperator.from_matrix(basis, l_xi)
    dag = superadjoint(h, t).body()
    star = l_xi.conj().T
    return {"dagger": dag, "star": star,
            "dagger_in_algebra": bool(is_left_mult(dag)),
            "star_in_algebra": bool(is_left_mult(star))}


def sigma_adjoint_check(p: DeformationParams, basis: TruncatedBasis) -> dict:
    """Sigma is almost-involutive and almost-unitary: Sigma^2 = r 1 and
    Sigma^dag = r Sigma^{-1} (equivalently Sigma^dag Sigma = r 1).

    Note |r| != 1 in general, so an identity of the form
    Sigma^dag = r Sigma cannot hold: any Gram-conjugation adjoint preserves
    operator norm, while scaling by r does not.  The consistent closure of
    almost-involutivity is through the inverse, and it holds exactly here:
    Sigma^dag = Sigma = r Sigma^{-1}.
    """
    from .quantization import sigma_op
    h = make_hilbert_super(basis)
    sig = sigma_op(p, basis)
    r = p.r
    body = sig.body()
    dag = superadjoint(h, sig).body()
    eye = np.eye(basis.size)
    scale = max(np.abs(body).max(), 1e-300)
    return {
        "r": r,
        "square_residual": float(np.abs(body @ body - r * eye).max() / abs(r)),
        "adjoint_residual": float(
            np.abs(dag - r * np.linalg.inv(body)).max() / scale),
        "almost_unitary_residual": float(
            np.abs(dag @ body - r * eye).max() / abs(r)),
        "self_adjoint_residual": float(np.abs(dag - body).max() / scale),
    }


def cstar_norm_check(h: HilbertSuper, ops, rng=None) -> dict:
    """Closure of a generating set under dagger and products; C*-identity
    discrepancies are recorded, not asserted."""
    rng = np.random.default_rng(rng)
    report = {"pairs": [], "dagger_involutive": True,
              "anti_multiplicative": True}
    mats = [t if isinstance(t, SuperOperator) else
            SuperOperator.from_matrix(h.basis, t) for t in ops]
    for t in mats:
        td = superadjoint(h, t)
        tdd = superadjoint(h, td)
        if not np.allclose(tdd.body(), t.body(), atol=1e-10):
            report["dagger_involutive"] = False
        nt = float(np.linalg.norm(t.body(), 2))
        ntt = float(np.linalg.norm(td.body() @ t.body(), 2))
        report["pairs"].append({"norm": nt, "norm_dag_t": ntt,
                                "cstar_gap": abs(ntt - nt * nt)})
    for a in mats:
        for b in mats:
            da, db = operator_degree(h, a), operator_degree(h, b)
            if da is None or db is None:
                continue
            lhs = superadjoint(h, a.compose(b)).body()
            sign = -1.0 if (da * db) % 2 else 1.0
            rhs = sign * (superadjoint(h, b).compose(superadjoint(h, a))).body()
            if not np.allclose(lhs, rhs, atol=1e-10):
                report["anti_multiplicative"] = False
    return report
