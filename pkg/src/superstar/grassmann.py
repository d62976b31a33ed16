"""Exact arithmetic of complexified Grassmann algebras with bitmask monomials.

Monomials over generators xi^1..xi^n are encoded as integer bitmasks: bit i
set means generator i+1 occurs (generators inside a monomial are always kept
in ascending order, the sign bookkeeping lives in ``sign_concat``).
"""

from __future__ import annotations

from dataclasses import dataclass, field


def parity(bits: int) -> int:
    """Z2 degree of the monomial encoded by ``bits``."""
    return bits.bit_count() & 1


def sign_concat(a: int, b: int) -> int:
    """Sign of reordering the concatenation (a, b) into the sorted union.

    Returns 0 when the monomials share a generator (nilpotency). This is
    the epsilon(I, J) cocycle: the signature of the permutation sorting the
    ascending list of I followed by the ascending list of J.
    """
    if a & b:
        return 0
    # inversions = sum over generators j in b of |{i in a : i > j}|
    inv = 0
    bb = b
    while bb:
        low = bb & -bb
        # generators of a strictly above this generator of b
        inv += (a & ~(low | (low - 1))).bit_count()
        bb ^= low
    return -1 if inv & 1 else 1


def sign_eps(i_bits: int, j_bits: int) -> int:
    """epsilon(I, J): 0 on overlap, else the permutation signature."""
    return sign_concat(i_bits, j_bits)


def reversal_sign(bits: int) -> int:
    """Sign of reversing the |I| generators of a monomial (not used by
    conjugation, which fixes real monomials; kept for involution checks)."""
    k = bits.bit_count()
    return -1 if (k * (k - 1) // 2) & 1 else 1


def monomial_str(bits: int) -> str:
    if bits == 0:
        return "1"
    gens = [str(i + 1) for i in range(bits.bit_length()) if bits >> i & 1]
    return "xi^{" + "".join(gens) + "}"


@dataclass
class SuperNumber:
    """Element of the Grassmann algebra on ``n`` generators, complex coefficients.

    coeffs maps monomial bitmask -> complex. Immutable by convention: all
    operations return fresh instances.
    """

    n: int
    coeffs: dict[int, complex] = field(default_factory=dict)

    @classmethod
    def scalar(cls, n: int, value: complex) -> "SuperNumber":
        return cls(n, {0: complex(value)} if value != 0 else {})

    @classmethod
    def monomial(cls, n: int, bits: int, value: complex = 1.0) -> "SuperNumber":
        if bits >> n:
            raise ValueError(f"monomial {bits:#x} outside algebra with n={n}")
        return cls(n, {bits: complex(value)})

    @classmethod
    def generator(cls, n: int, i: int) -> "SuperNumber":
        """The generator xi^i, 1-based."""
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} out of range 1..{n}")
        return cls(n, {1 << (i - 1): 1.0 + 0j})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0j) + v
        return SuperNumber(self.n, {k: v for k, v in out.items() if v != 0})

    __radd__ = __add__

    def __neg__(self):
        return SuperNumber(self.n, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[int, complex] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                s = sign_concat(a, b)
                if s:
                    k = a | b
                    out[k] = out.get(k, 0j) + s * ca * cb
        return SuperNumber(self.n, {k: v for k, v in out.items() if v != 0})

    def __rmul__(self, other):
        return self._coerce(other) * self

    def _coerce(self, other) -> "SuperNumber":
        if isinstance(other, SuperNumber):
            if other.n != self.n:
                raise ValueError("mixing Grassmann algebras of different rank")
            return other
        return SuperNumber.scalar(self.n, other)

    def conj(self) -> "SuperNumber":
        """Complex conjugation: fixes real monomials, conjugates coefficients.

        Anti-multiplicative with the Koszul sign, conj(ab) =
        (-1)^{|a||b|} conj(b) conj(a), as a consequence of graded
        commutativity.
        """
        return SuperNumber(self.n, {k: v.conjugate() for k, v in self.coeffs.items()})

    def coeff(self, bits: int) -> complex:
        return self.coeffs.get(bits, 0j)

    def body(self) -> complex:
        return self.coeffs.get(0, 0j)

    @property
    def degree(self) -> int | None:
        """Z2 degree if homogeneous, else None. Zero counts as even."""
        ps = {parity(k) for k in self.coeffs}
        if not ps:
            return 0
        if len(ps) == 1:
            return ps.pop()
        return None

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self.coeffs.values())

    def berezin(self, gen: int) -> "SuperNumber":
        """Berezin integral over a single generator (1-based).

        Extraction from the left: int d(xi^g) xi^g . rest = rest, with the
        sign of moving xi^g to the front of the sorted monomial.
        """
        bit = 1 << (gen - 1)
        out: dict[int, complex] = {}
        for k, v in self.coeffs.items():
            if not k & bit:
                continue
            # sign of moving the generator past the smaller ones in front
            below = (k & (bit - 1)).bit_count()
            s = -1 if below & 1 else 1
            out[k ^ bit] = out.get(k ^ bit, 0j) + s * v
        return SuperNumber(self.n, {k: v for k, v in out.items() if v != 0})

    def berezin_block(self, gens: list[int], descending: bool = True) -> "SuperNumber":
        """Iterated Berezin integral over a block of generators.

        Default order integrates the highest generator first, matching the
        measure convention in which int d(xi) xi^{1..k} = +1 for the block.
        """
        order = sorted(gens, reverse=descending)
        out = self
        for g in order:
            out = out.berezin(g)
        return out

    def exp(self) -> "SuperNumber":
        """Exponential of a nilpotent-or-scalar element (finite sum)."""
        body = self.body()
        soul = self - SuperNumber.scalar(self.n, body)
        import cmath

        acc = SuperNumber.scalar(self.n, 1.0)
        term = SuperNumber.scalar(self.n, 1.0)
        # soul is nilpotent: soul^(n+1) = 0 always
        for k in range(1, self.n + 1):
            term = term * soul
            if not term.coeffs:
                break
            acc = acc + SuperNumber(self.n, {m: v / _fact(k) for m, v in term.coeffs.items()})
        scale = cmath.exp(body)
        return SuperNumber(self.n, {m: scale * v for m, v in acc.coeffs.items()})

    def map_coeffs(self, fn) -> "SuperNumber":
        out = {k: fn(v) for k, v in self.coeffs.items()}
        return SuperNumber(self.n, {k: v for k, v in out.items() if v != 0})

    def norm1(self) -> float:
        return sum(abs(v) for v in self.coeffs.values())

    def __repr__(self):
        if not self.coeffs:
            return "SuperNumber(0)"
        parts = [f"({v:.6g})*{monomial_str(k)}" for k, v in sorted(self.coeffs.items())]
        return "SuperNumber(" + " + ".join(parts) + ")"


def _fact(k: int) -> float:
    out = 1.0
    for i in range(2, k + 1):
        out *= i
    return out


def embed(x: SuperNumber, n_new: int, offset: int) -> SuperNumber:
    """Embed into a larger algebra, shifting generators by ``offset``."""
    if x.n + offset > n_new:
        raise ValueError("embedding does not fit")
    return SuperNumber(n_new, {k << offset: v for k, v in x.coeffs.items()})
