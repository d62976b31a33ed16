"""Induced representation, involution operator, and Weyl-type quantization.

The carrier space is L^2(R^{m/2}) tensor a Grassmann factor, truncated to
``levels`` Hermite functions (width sqrt(theta)) per even axis and the full
2^n odd monomial basis.  Group elements may carry odd coordinates valued in
an auxiliary Grassmann algebra; operators are stored component-wise over
auxiliary monomials with graded composition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grassmann import SuperNumber, parity, sign_eps
from .params import DeformationParams


# =====================================================================
# basis
# =====================================================================

@dataclass(frozen=True)
class TruncatedBasis:
    """Hermite-level tensor odd-monomial basis, flat index I * N^h + j."""

    m: int
    n: int
    levels: int
    theta: float

    @property
    def h(self) -> int:
        return self.m // 2

    @property
    def even_size(self) -> int:
        return self.levels ** self.h

    @property
    def size(self) -> int:
        return self.even_size * 2 ** self.n

    @property
    def scale(self) -> float:
        return float(np.sqrt(self.theta))

    def parity_vector(self) -> np.ndarray:
        """Grading of each basis vector (parity of the odd monomial)."""
        par = np.array([parity(i_bits) & 1 for i_bits in range(2 ** self.n)])
        return np.repeat(par, self.even_size)

    def hermite_values(self, x: np.ndarray, levels: int = None) -> np.ndarray:
        """Orthonormal scaled Hermite functions, table (levels, len(x))."""
        lv = self.levels if levels is None else levels
        lam = self.scale
        t = np.asarray(x, dtype=float) / lam
        out = np.empty((lv, t.size))
        out[0] = np.pi ** -0.25 * np.exp(-0.5 * t * t) / np.sqrt(lam)
        if lv > 1:
            out[1] = np.sqrt(2.0) * t * out[0]
        for j in range(2, lv):
            out[j] = np.sqrt(2.0 / j) * t * out[j - 1] - np.sqrt((j - 1) / j) * out[j - 2]
        return out

    def quad_rule(self, extra_width: float = 0.0, oversample: int = 8):
        """Gauss-Legendre rule resolving every basis function."""
        lam = self.scale
        half = lam * (np.sqrt(2.0 * (2 * self.levels + 1)) + 2.0) + extra_width
        nodes = oversample * self.levels + 80 + int(20 * extra_width)
        x0, w0 = np.polynomial.legendre.leggauss(nodes)
        return half * x0, half * w0


# =====================================================================
# graded operators
# =====================================================================

@dataclass
class SuperOperator:
    """sum_A eta^A T_A with complex matrices T_A on the truncated basis."""

    basis: TruncatedBasis
    n_aux: int
    comps: dict = field(default_factory=dict)  # aux bits -> matrix

    @classmethod
    def from_matrix(cls, basis, mat, n_aux=0):
        return cls(basis, n_aux, {0: np.asarray(mat, dtype=complex)})

    @classmethod
    def identity(cls, basis, n_aux=0):
        return cls.from_matrix(basis, np.eye(basis.size), n_aux)

    def comp(self, bits: int) -> np.ndarray:
        z = np.zeros((self.basis.size, self.basis.size), dtype=complex)
        return self.comps.get(bits, z)

    def body(self) -> np.ndarray:
        return self.comp(0)

    def __add__(self, other):
        comps = dict(self.comps)
        for b, mat in other.comps.items():
            comps[b] = comps.get(b, 0) + mat
        return SuperOperator(self.basis, max(self.n_aux, other.n_aux), comps)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, c):
        return SuperOperator(self.basis, self.n_aux,
                             {b: c * mat for b, mat in self.comps.items()})

    def scale_super(self, s: SuperNumber):
        """Left multiplication by an auxiliary-algebra scalar."""
        out: dict = {}
        pvec = self.basis.parity_vector()
        for a_bits, coeff in s.coeffs.items():
            for b_bits, mat in self.comps.items():
                if a_bits & b_bits:
                    continue
                sgn = sign_eps(a_bits, b_bits)
                k = a_bits | b_bits
                out[k] = out.get(k, 0) + coeff * sgn * mat
        return SuperOperator(self.basis, max(self.n_aux, s.n), out)

    def _parity_split(self, mat):
        pvec = self.basis.parity_vector()
        even_mask = (pvec[:, None] == pvec[None, :])
        return mat * even_mask, mat * (~even_mask)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        """(S T) with the Koszul sign from moving eta^B through S_A."""
        out: dict = {}
        for a_bits, sa in self.comps.items():
            sa0, sa1 = self._parity_split(sa)
            for b_bits, tb in other.comps.items():
                if a_bits & b_bits:
                    continue
                sgn = sign_eps(a_bits, b_bits)
                k = a_bits | b_bits
                mb = sa0 @ tb
                if np.any(sa1):
                    mb = mb + (-1.0 if parity(b_bits) & 1 else 1.0) * (sa1 @ tb)
                out[k] = out.get(k, 0) + sgn * mb
        return SuperOperator(self.basis, max(self.n_aux, other.n_aux), out)

    def norm(self) -> float:
        """Largest component spectral norm."""
        return max((float(np.linalg.norm(mat, 2)) for mat in self.comps.values()),
                   default=0.0)

    def is_zero(self, tol=0.0) -> bool:
        return all(np.abs(mat).max() <= tol for mat in self.comps.values())


# =====================================================================
# group elements
# =====================================================================

@dataclass
class GroupElement:
    """(x, xi, a): even coordinate in R^m, odd coordinates as real
    coefficients over ``n_aux`` auxiliary generators (odd[a, i] eta_a xi-slot
    i), central coordinate an even auxiliary supernumber."""

    x: np.ndarray
    odd: np.ndarray          # (n_aux, n)
    center: SuperNumber      # over n_aux generators, even
    params: DeformationParams

    @classmethod
    def even(cls, p: DeformationParams, x, a=0.0, n_aux=0):
        return cls(np.asarray(x, dtype=float), np.zeros((n_aux, p.n)),
                   SuperNumber.scalar(n_aux, a), p)

    @classmethod
    def general(cls, p: DeformationParams, x, odd, a=0.0):
        odd = np.asarray(odd, dtype=float)
        return cls(np.asarray(x, dtype=float), odd,
                   SuperNumber.scalar(odd.shape[0], a), p)

    @property
    def n_aux(self) -> int:
        return self.odd.shape[0]

    def odd_coordinate(self, i: int) -> SuperNumber:
        """xi^i as an auxiliary supernumber (odd, 1-based slot)."""
        return SuperNumber(self.n_aux, {1 << a: complex(self.odd[a, i - 1])
                                        for a in range(self.n_aux)
                                        if self.odd[a, i - 1] != 0})

    def mul(self, other: "GroupElement") -> "GroupElement":
        p = self.params
        if self.n_aux != other.n_aux:
            raise ValueError("auxiliary algebras differ")
        x = self.x + other.x
        odd = self.odd + other.odd
        coc = 0.5 * p.omega0_pair(self.x, other.x)
        c = self.center + other.center + SuperNumber.scalar(self.n_aux, coc)
        for i in range(1, p.n + 1):
            c = c + self.odd_coordinate(i) * other.odd_coordinate(i)
        return GroupElement(x, odd, c, p)

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.x, -self.odd, -self.center, self.params)


# =====================================================================
# the representation
# =====================================================================

_QUAD_CACHE: dict = {}


def _cached_rule(basis: TruncatedBasis, lv: int, extra_width: float):
    """Quadrature rule and Hermite table, cached on a bucketed width so
    large mode sums reuse the same rule."""
    bucket = int(np.ceil(extra_width))
    key = (basis.levels, lv, round(basis.theta, 12), bucket)
    if key not in _QUAD_CACHE:
        xs, ws = basis.quad_rule(extra_width=float(bucket))
        _QUAD_CACHE[key] = (xs, ws, basis.hermite_values(xs, lv))
    return _QUAD_CACHE[key]


def _even_rep_matrix_1d(basis: TruncatedBasis, theta: float, x: float,
                        w: float, levels: int = None) -> np.ndarray:
    """<h_j | e^{(i/theta) (x - 2 x0) w / 2} T_x | h_l> by quadrature."""
    lv = basis.levels if levels is None else levels
    xs, ws, hj = _cached_rule(basis, lv, abs(x))
    hl = basis.hermite_values(xs - x, lv)
    phase = np.exp(1j / theta * 0.5 * (x - 2.0 * xs) * w)
    return (hj * (ws * phase)[None, :]) @ hl.T


def _odd_rep_components(p: DeformationParams, g: GroupElement):
    """e^{(i/theta) xi.xi0} (xi0 - xi)^J expanded over Lambda(aux + xi0).

    Returns dict aux_bits -> (2^n, 2^n) matrix on the odd monomial basis.
    """
    n, s = p.n, g.n_aux
    big = s + n

    def xi0(i):
        return SuperNumber.generator(big, s + i)

    def xi(i):
        sn = g.odd_coordinate(i)
        return SuperNumber(big, dict(sn.coeffs))

    phase = SuperNumber.scalar(big, 0)
    for i in range(1, n + 1):
        phase = phase + (1j / p.theta) * (xi(i) * xi0(i))
    phase = phase.exp()

    lo = (1 << s) - 1
    out: dict = {}
    for j_bits in range(1 << n):
        vec = SuperNumber.scalar(big, 1.0)
        for i in range(1, n + 1):
            if j_bits >> (i - 1) & 1:
                vec = vec * (xi0(i) - xi(i))
        col = phase * vec
        for bits, coeff in col.coeffs.items():
            a_bits, i_bits = bits & lo, bits >> s
            if a_bits not in out:
                out[a_bits] = np.zeros((1 << n, 1 << n), dtype=complex)
            out[a_bits][i_bits, j_bits] += coeff
    return out


def rep_U(p: DeformationParams, basis: TruncatedBasis, g: GroupElement,
          levels: int = None) -> SuperOperator:
    """The induced representation on the truncated basis."""
    lv = basis.levels if levels is None else levels
    even = np.eye(1, dtype=complex)
    for ax in range(basis.h):
        e1 = _even_rep_matrix_1d(basis, p.theta, g.x[ax], g.x[basis.h + ax], lv)
        even = np.kron(even, e1)
    odd = _odd_rep_components(p, g)
    central = ((1j / p.theta) * g.center).exp()
    comps: dict = {}
    for a_bits, omat in odd.items():
        comps[a_bits] = np.kron(omat, even)
    op = SuperOperator(basis, g.n_aux, comps)
    return op.scale_super(central)


def _sigma_odd_kernel(p: DeformationParams) -> np.ndarray:
    """K[I, J]: integral d xi1 e^{-(i alpha/theta) xi1.xi0} xi1^J over
    Lambda(xi0 + xi1), Berezin on the xi1 block."""
    n = p.n
    big = 2 * n
    phase = SuperNumber.scalar(big, 0)
    for i in range(1, n + 1):
        x0 = SuperNumber.generator(big, i)
        x1 = SuperNumber.generator(big, n + i)
        phase = phase + (-1j * p.alpha / p.theta) * (x1 * x0)
    phase = phase.exp()
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for j_bits in range(1 << n):
        vec = SuperNumber.monomial(big, j_bits << n)
        col = (phase * vec).berezin_block(list(range(n + 1, 2 * n + 1)))
        for bits, coeff in col.coeffs.items():
            out[bits, j_bits] += coeff
    return out


def sigma_op(p: DeformationParams, basis: TruncatedBasis,
             levels: int = None) -> SuperOperator:
    """Sigma phi(x0, xi0) = gamma int d xi1 e^{-(i alpha/theta) xi1 xi0}
    phi(-x0, xi1): Hermite parity tensor the exact odd kernel."""
    lv = basis.levels if levels is None else levels
    par_1d = np.diag([(-1.0) ** j for j in range(lv)])
    even = np.eye(1)
    for _ in range(basis.h):
        even = np.kron(even, par_1d)
    kern = _sigma_odd_kernel(p)
    return SuperOperator.from_matrix(basis, p.gamma * np.kron(kern, even))


def omega_point(p: DeformationParams, basis: TruncatedBasis,
                g: GroupElement) -> SuperOperator:
    """Quantization kernel at a group point: U Sigma U^{-1}."""
    u = rep_U(p, basis, g)
    ui = rep_U(p, basis, g.inverse())
    return u.compose(sigma_op(p, basis)).compose(ui)


# =====================================================================
# Weyl-type quantization of symbols
# =====================================================================

def displacement_matrix(p: DeformationParams, basis: TruncatedBasis, k,
                        levels: int = None) -> np.ndarray:
    """Quantized even plane wave e_k, k = (p_vec, q_vec):
    psi(x0) -> e^{i p.x0} e^{-i p.q theta/2} psi(x0 - theta q)."""
    lv = basis.levels if levels is None else levels
    k = np.asarray(k, dtype=float)
    h = basis.h
    pv, qv = k[:h], k[h:]
    out = np.eye(1, dtype=complex)
    for ax in range(h):
        xs, ws, hj = _cached_rule(basis, lv, abs(p.theta * qv[ax]))
        hl = basis.hermite_values(xs - p.theta * qv[ax], lv)
        m1 = (hj * (ws * np.exp(1j * pv[ax] * xs))[None, :]) @ hl.T
        out = np.kron(out, m1)
    return out * np.exp(-0.5j * p.theta * float(pv @ qv))


_ODD_QUANT_CACHE: dict = {}


def odd_quantization_matrices(p: DeformationParams) -> dict:
    """O_I = C int d^n xi xi^I U(xi) K U(xi)^{-1}, normalized so O_0 = id.

    Everything is exact Grassmann algebra: the group odd coordinates are
    spanned by n auxiliary generators appearing linearly, and the Berezin
    integral extracts the top auxiliary component.
    """
    key = (p.n, p.theta, p.alpha)
    if key in _ODD_QUANT_CACHE:
        return _ODD_QUANT_CACHE[key]
    n = p.n
    dim = 1 << n
    kern = _sigma_odd_kernel(p)

    # aux generator a holds the integration variable xi^a
    base = DeformationParams(p.theta, p.alpha, p.m, n)
    g = GroupElement(np.zeros(p.m), np.eye(n), SuperNumber.scalar(n, 0.0), base)
    u_comps = _odd_rep_components(base, g)
    gi = g.inverse()
    ui_comps = _odd_rep_components(base, gi)

    def compose(ca, cb):
        # graded composition over aux monomials on the 2^n odd basis
        pvec = np.array([parity(i) & 1 for i in range(dim)])
        even_mask = (pvec[:, None] == pvec[None, :])
        out = {}
        for a_bits, ma in ca.items():
            ma0, ma1 = ma * even_mask, ma * (~even_mask)
            for b_bits, mb in cb.items():
                if a_bits & b_bits:
                    continue
                sgn = sign_eps(a_bits, b_bits)
                mat = ma0 @ mb + (-1.0 if parity(b_bits) & 1 else 1.0) * (ma1 @ mb)
                k2 = a_bits | b_bits
                out[k2] = out.get(k2, 0) + sgn * mat
        return out

    conj = compose(compose(u_comps, {0: kern}), ui_comps)

    # Berezin over all aux generators against the source monomial xi^I:
    # int d^n xi  xi^I * (sum_A eta^A M_A); with xi^a = eta_a the integral
    # of eta^I eta^A survives iff A = complement(I), with the concat sign.
    full = (1 << n) - 1
    out = {}
    for i_bits in range(dim):
        a_bits = full ^ i_bits
        mat = conj.get(a_bits)
        if mat is None:
            out[i_bits] = np.zeros((dim, dim), dtype=complex)
            continue
        # sign of xi^I eta^A relative to the top monomial, then the
        # descending Berezin extraction sign on n generators
        sgn = sign_eps(i_bits, a_bits)
        top = SuperNumber.monomial(n, full, float(sgn))
        val = top.berezin_block(list(range(1, n + 1)))
        out[i_bits] = complex(val.coeff(0)) * mat
    c0 = out[0][0, 0]
    if abs(c0) < 1e-300:
        raise ArithmeticError("degenerate odd quantization normalization")
    check = out[0] / c0
    if not np.allclose(check, np.eye(dim), atol=1e-10):
        raise ArithmeticError("odd quantization of 1 is not the identity")
    out = {i: m / c0 for i, m in out.items()}
    _ODD_QUANT_CACHE[key] = out
    return out


def omega_map(p: DeformationParams, basis: TruncatedBasis, f,
              levels: int = None) -> SuperOperator:
    """Quantize a symbol: mode sum of displacement operators tensor the
    exact odd quantization matrices.  Components must be PlaneWaveSum or
    GridFn (grids contribute their significant Fourier modes)."""
    from .coeffs import GridFn, PlaneWaveSum

    lv = basis.levels if levels is None else levels
    odd_mats = odd_quantization_matrices(p)
    total = None
    for i_bits, c in f.comps.items():
        if isinstance(c, PlaneWaveSum):
            modes = list(c.terms.items())
        elif isinstance(c, GridFn):
            md = c.modes()
            ks = c.mode_wavenumbers()
            sig = np.argwhere(np.abs(md) > 1e-13 * max(1e-300, np.abs(md).max()))
            modes = [(tuple(ks[ix]), md[tuple(ix)]) for ix in sig]
        else:
            raise TypeError("omega_map needs PlaneWaveSum or GridFn components")
        acc = 0
        for k, amp in modes:
            acc = acc + amp * displacement_matrix(p, basis, k, lv)
        term = SuperOperator.from_matrix(basis, np.kron(odd_mats[i_bits], acc))
        total = term if total is None else total + term
    if total is None:
        total = SuperOperator(basis, 0, {})
    return total


# =====================================================================
# checks
# =====================================================================

def odd_gram(p: DeformationParams) -> np.ndarray:
    """Superhermitian pairing of odd monomials: <xi^I, xi^J> =
    eps(I, comp I) delta_{J, comp I}."""
    n = p.n
    dim = 1 << n
    full = dim - 1
    out = np.zeros((dim, dim), dtype=complex)
    for i_bits in range(dim):
        out[i_bits, full ^ i_bits] = sign_eps(i_bits, full ^ i_bits)
    return out


def basis_gram(p: DeformationParams, basis: TruncatedBasis,
               levels: int = None) -> np.ndarray:
    lv = basis.levels if levels is None else levels
    return np.kron(odd_gram(p), np.eye(lv ** basis.h))


def projected_residual(basis: TruncatedBasis, mat: np.ndarray,
                       keep_levels: int) -> float:
    """Spectral norm of the residual compressed to the first
    ``keep_levels`` Hermite levels on both sides (m = 2 layout)."""
    lv = basis.levels
    keep = np.concatenate([i_b * lv + np.arange(keep_levels)
                           for i_b in range(2 ** basis.n)])
    sub = mat[np.ix_(keep, keep)]
    return float(np.linalg.norm(sub, 2))


def truncation_leakage(p: DeformationParams, basis: TruncatedBasis,
                       g: GroupElement, keep_levels: int = None) -> float:
    """Out-of-span mass of U(g) columns in the kept half-band, estimated
    on a doubled basis."""
    keep = basis.levels // 2 if keep_levels is None else keep_levels
    big = TruncatedBasis(basis.m, basis.n, 2 * basis.levels, basis.theta)
    u_big = rep_U(p, big, g)
    lv2 = 2 * basis.levels
    low = np.concatenate([i_b * lv2 + np.arange(keep) for i_b in range(2 ** basis.n)])
    band = np.concatenate([i_b * lv2 + np.arange(basis.levels)
                           for i_b in range(2 ** basis.n)])
    high = np.setdiff1d(np.arange(big.size), band)
    worst = 0.0
    for mat in u_big.comps.values():
        block = mat[np.ix_(high, low)]
        if block.size:
            worst = max(worst, float(np.linalg.norm(block, 2)))
    return worst


def rep_property_check(p: DeformationParams, basis: TruncatedBasis,
                       g1: GroupElement, g2: GroupElement) -> dict:
    """U(g1) U(g2) = U(g1 g2) on the truncated space, with the residual
    projected to the lower half of the Hermite band and compared against
    the truncation leakage of the factors."""
    u1 = rep_U(p, basis, g1)
    u2 = rep_U(p, basis, g2)
    u12 = rep_U(p, basis, g1.mul(g2))
    diff = u1.compose(u2) - u12
    keep = basis.levels // 2
    res = max((projected_residual(basis, mat, keep)
               for mat in diff.comps.values()), default=0.0)
    leak = max(truncation_leakage(p, basis, g1), truncation_leakage(p, basis, g2))
    return {"projected_residual": res, "leakage_bound": leak,
            "ok": bool(res <= max(leak, 1e-12))}


def unitarity_check(p: DeformationParams, basis: TruncatedBasis,
                    g: GroupElement) -> dict:
    """Superhermitian Gram preservation: U^dag S U = S, projected."""
    u = rep_U(p, basis, g)
    s = basis_gram(p, basis)
    # dagger on components: conjugate transpose, with the Koszul parity
    # twist P^{|A|} for odd auxiliary monomials (real odd coordinates)
    keep = basis.levels // 2
    pmat = np.diag(1.0 - 2.0 * basis.parity_vector())
    udag = {b: (pmat @ mat.conj().T if parity(b) else mat.conj().T)
            for b, mat in u.comps.items()}
    # (U^dag S U)_C = sum_{A | B = C, disjoint} eps(A, B) udag_A S u_B
    prod: dict = {}
    for a_bits, da in udag.items():
        for b_bits, ub in u.comps.items():
            if a_bits & b_bits:
                continue
            k = a_bits | b_bits
            prod[k] = prod.get(k, 0) + sign_eps(a_bits, b_bits) * (da @ s @ ub)
    prod[0] = prod.get(0, 0) - s
    res = max((projected_residual(basis, mat, keep)
               for mat in prod.values()), default=0.0)
    leak = truncation_leakage(p, basis, g)
    return {"projected_residual": res, "leakage_bound": leak,
            "ok": bool(res <= max(2.0 * leak + leak * leak, 1e-12))}
