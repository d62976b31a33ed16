"""Superfunctions f(x, xi) = sum_I f_I(x) xi^I as finite coefficient families."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .coeffs import (AliasingError, BackendMismatch, GaussianPoly, GridFn,
                     PlaneWaveSum, coeff_zero_like)
from .grassmann import SuperNumber, parity, sign_eps


@dataclass
class SuperFunction:
    """Finite map bitmask -> CoeffFn over R^{m|n}."""

    m: int
    n: int
    comps: dict = field(default_factory=dict)  # bits -> CoeffFn

    @classmethod
    def from_even(cls, n, coeff):
        return cls(coeff.dim, n, {0: coeff})

    @classmethod
    def monomial(cls, m, n, bits, coeff):
        if bits >> n:
            raise ValueError("monomial outside odd dimension")
        return cls(m, n, {bits: coeff})

    def component(self, bits):
        return self.comps.get(bits)

    def __add__(self, other):
        self._compat(other)
        comps = dict(self.comps)
        for b, c in other.comps.items():
            comps[b] = c if b not in comps else comps[b].add(c)
        return SuperFunction(self.m, self.n, comps)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, c):
        return SuperFunction(self.m, self.n, {b: f.scale(c) for b, f in self.comps.items()})

    def mul(self, other):
        """Graded-commutative pointwise product."""
        self._compat(other)
        comps: dict = {}
        for a, fa in self.comps.items():
            for b, fb in other.comps.items():
                s = sign_eps(a, b)
                if not s:
                    continue
                k = a | b
                term = fa.mul(fb)
                if s < 0:
                    term = term.scale(-1.0)
                comps[k] = term if k not in comps else comps[k].add(term)
        return SuperFunction(self.m, self.n, comps)

    def conj(self):
        return SuperFunction(self.m, self.n, {b: f.conj() for b, f in self.comps.items()})

    def deriv_even(self, axis):
        return SuperFunction(self.m, self.n, {b: f.deriv(axis) for b, f in self.comps.items()})

    def deriv_odd(self, gen):
        """Left derivative d/d(xi^gen), 1-based."""
        bit = 1 << (gen - 1)
        comps = {}
        for b, f in self.comps.items():
            if b & bit:
                below = (b & (bit - 1)).bit_count()
                s = -1.0 if below & 1 else 1.0
                comps[b ^ bit] = f.scale(s) if (b ^ bit) not in comps else comps[b ^ bit].add(f.scale(s))
        return SuperFunction(self.m, self.n, comps)

    def eval(self, pts) -> list[SuperNumber]:
        """Evaluate at even points; odd directions stay symbolic."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        vals = {b: f.eval(pts) for b, f in self.comps.items()}
        out = []
        for i in range(pts.shape[0]):
            out.append(SuperNumber(self.n, {b: complex(v[i]) for b, v in vals.items()
                                            if v[i] != 0}))
        return out

    @property
    def degree(self):
        ps = {parity(b) for b, c in self.comps.items() if not c.is_zero(0.0)}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def is_zero(self, tol=0.0):
        return all(c.is_zero(tol) for c in self.comps.values())

    def map_comps(self, fn):
        return SuperFunction(self.m, self.n, {b: fn(c) for b, c in self.comps.items()})

    def to_grid(self, box, samples):
        return self.map_comps(lambda c: c.to_grid(box, samples))

    def _compat(self, other):
        if self.m != other.m or self.n != other.n:
            raise BackendMismatch("superfunction dimensions differ")

    # ---------------- serialization ----------------

    def to_json(self) -> str:
        comps = []
        for b, c in sorted(self.comps.items()):
            comps.append({"index_bits": b, "payload": _coeff_payload(c)})
        backend = type(next(iter(self.comps.values()))).__name__ if self.comps else "empty"
        return json.dumps({"n": self.n, "m": self.m, "backend": backend, "comps": comps})

    @classmethod
    def from_json(cls, text: str) -> "SuperFunction":
        doc = json.loads(text)
        comps = {}
        for entry in doc["comps"]:
            comps[int(entry["index_bits"])] = _coeff_from_payload(doc["m"], entry["payload"])
        return cls(doc["m"], doc["n"], comps)


def _coeff_payload(c):
    if isinstance(c, PlaneWaveSum):
        return {"kind": "plane_wave_sum",
                "terms": [{"k": list(k), "amp": [a.real, a.imag]}
                          for k, a in c.terms.items()]}
    if isinstance(c, GaussianPoly):
        return {"kind": "gaussian_poly",
                "poly": [{"expo": list(e), "coef": [v.real, v.imag]}
                         for e, v in c.poly.items()],
                "quad_re": c.quad.real.tolist(), "quad_im": c.quad.imag.tolist()
                if np.iscomplexobj(c.quad) else np.zeros_like(c.quad).tolist(),
                "center": c.center.tolist(), "osc_k": c.osc_k.tolist()}
    if isinstance(c, GridFn):
        flat = c.values.ravel(order="C")
        return {"kind": "grid", "box": c.box, "samples": c.n_samples,
                "values": np.stack([flat.real, flat.imag], axis=-1).tolist()}
    raise TypeError(type(c))


def _coeff_from_payload(m, payload):
    kind = payload["kind"]
    if kind == "plane_wave_sum":
        terms = {tuple(t["k"]): complex(*t["amp"]) for t in payload["terms"]}
        return PlaneWaveSum(m, terms)
    if kind == "gaussian_poly":
        poly = {tuple(t["expo"]): complex(*t["coef"]) for t in payload["poly"]}
        quad = np.asarray(payload["quad_re"]) + 1j * np.asarray(payload["quad_im"])
        if np.allclose(quad.imag, 0):
            quad = quad.real
        return GaussianPoly(m, poly, quad,
                            np.asarray(payload["center"]), np.asarray(payload["osc_k"]))
    if kind == "grid":
        n = payload["samples"]
        arr = np.asarray(payload["values"])
        vals = (arr[..., 0] + 1j * arr[..., 1]).reshape((n,) * m)
        return GridFn(m, payload["box"], vals)
    raise ValueError(kind)
