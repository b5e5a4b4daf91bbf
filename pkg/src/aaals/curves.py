"""Analytic closed curves: validation, built-in library, random generator.

Curves are maps from the parameter interval [-1, 1] to the complex plane with
Gamma(-1) = Gamma(1).  Validation checks closure, simplicity (no polyline
self-intersection on a 2048-point discretization) and non-degeneracy of the
parametrization (finite-difference |Gamma'| bounded away from zero).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CurveError",
    "ParametricCurve",
    "unit_circle",
    "make_curve",
    "random_jordan",
    "LIBRARY",
]


class CurveError(ValueError):
    """Raised when a curve fails validation."""


@dataclass(frozen=True)
class ParametricCurve:
    """Closed parametric curve Gamma(t), t in [-1, 1]."""

    gamma: callable
    periodic: bool = True
    analytic_hint: bool = True
    name: str = ""

    def __call__(self, t):
        return self.gamma(np.asarray(t, dtype=float))

    def points(self, n: int) -> np.ndarray:
        """n points at uniform parameters in [-1, 1)."""
        return self(np.linspace(-1.0, 1.0, n, endpoint=False))

    def polyline(self, n: int = 2048) -> np.ndarray:
        """n+1 points at uniform parameters in [-1, 1] (closed)."""
        return self(np.linspace(-1.0, 1.0, n + 1))

    def scale(self) -> float:
        p = self.points(256)
        return float(np.abs(p - p.mean()).max())

    def centroid(self) -> complex:
        return complex(self.points(1024).mean())

    def contains(self, pts, n: int = 2048) -> np.ndarray:
        """Winding-number interior test, vectorized over pts."""
        P = self.polyline(n)
        pts = np.atleast_1d(np.asarray(pts, dtype=complex)).ravel()
        wind = np.empty(len(pts))
        chunk = max(1, 2_000_000 // (n + 1))
        for i in range(0, len(pts), chunk):
            seg = P[None, :] - pts[i : i + chunk, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                ang = np.angle(seg[:, 1:] / seg[:, :-1])
            wind[i : i + chunk] = np.abs(ang.sum(axis=1)) / (2 * np.pi)
        return wind > 0.5

    def distance_to(self, pts, n: int = 4096) -> np.ndarray:
        """Distance from each point to the curve polyline."""
        P = self.polyline(n)
        pts = np.atleast_1d(np.asarray(pts, dtype=complex)).ravel()
        out = np.empty(len(pts))
        chunk = max(1, 2_000_000 // (n + 1))
        for i in range(0, len(pts), chunk):
            out[i : i + chunk] = np.abs(P[None, :] - pts[i : i + chunk, None]).min(axis=1)
        return out

    def fingerprint(self) -> str:
        """Hash of 256 curve samples; keys the stage cache."""
        p = self.points(256)
        return hashlib.sha256(np.ascontiguousarray(p).tobytes()).hexdigest()[:16]

    def is_closed(self, rtol: float = 1e-12) -> bool:
        a, b = self(np.array([-1.0, 1.0]))
        return abs(a - b) <= rtol * max(self.scale(), 1e-30)

    def is_simple(self, n: int = 2048) -> bool:
        """No self-intersection of the n-point polyline."""
        P = self.polyline(n)
        a = P[:-1]
        d = P[1:] - a
        cross = lambda u, v: u.real * v.imag - u.imag * v.real
        # segment i vs segment j intersection test, chunked over i
        for i0 in range(0, n, 256):
            i1 = min(i0 + 256, n)
            ai = a[i0:i1, None]
            di = d[i0:i1, None]
            denom = cross(di, d[None, :])
            rel = a[None, :] - ai
            with np.errstate(divide="ignore", invalid="ignore"):
                s = cross(rel, d[None, :]) / denom
                t = cross(rel, di) / denom
            # inclusive bounds: non-adjacent segments of a simple curve never
            # share even an endpoint, so touching counts as an intersection
            hit = (s > -1e-9) & (s < 1 + 1e-9) & (t > -1e-9) & (t < 1 + 1e-9)
            idx = np.arange(i0, i1)[:, None]
            jdx = np.arange(n)[None, :]
            gap = np.minimum(np.abs(idx - jdx), n - np.abs(idx - jdx))
            hit &= gap > 1
            if hit.any():
                return False
        return True

    def min_speed(self, n: int = 2048) -> float:
        """min |Gamma'| estimated by centered differences on n points."""
        t = np.linspace(-1.0, 1.0, n, endpoint=False)
        h = 1e-6
        dp = (self(t + h) - self(t - h)) / (2 * h)
        return float(np.abs(dp).min())

    def validate(self, min_speed: float = 1e-6) -> "ParametricCurve":
        if not self.is_closed():
            raise CurveError(f"curve {self.name!r} is not closed")
        if not self.is_simple():
            raise CurveError(f"curve {self.name!r} self-intersects")
        if self.min_speed() < min_speed:
            raise CurveError(f"curve {self.name!r} has degenerate parametrization")
        return self


def unit_circle() -> ParametricCurve:
    return ParametricCurve(lambda t: np.exp(1j * np.pi * t), name="circle")


def _radial(radius_fn, name):
    return ParametricCurve(
        lambda t: radius_fn(t) * np.exp(1j * np.pi * t), name=name
    )


def _circle(radius=1.0, cx=0.0, cy=0.0):
    c = complex(float(cx), float(cy))
    r = float(radius)
    return ParametricCurve(lambda t: c + r * np.exp(1j * np.pi * t), name="circle")


def _ellipse(a=1.0, b=0.5):
    a, b = float(a), float(b)
    return ParametricCurve(
        lambda t: a * np.cos(np.pi * t) + 1j * b * np.sin(np.pi * t), name="ellipse"
    )


def _starfish():
    return _radial(lambda t: 1 + 0.3 * np.cos(5 * np.pi * t), "starfish")


def _trefoil():
    return _radial(lambda t: 1 + 0.3 * np.cos(3 * np.pi * t), "trefoil")


def _crescent_gc():
    def g(t):
        e = np.exp(1j * np.pi * t)
        return (
            e
            - 0.1 / (e + 0.9)
            - (0.07 + 0.02j) / (e - 0.8 - 0.2j)
            + 0.2 / (e - 0.2 + 0.5j)
        )

    return ParametricCurve(g, name="crescent_gc")


def _corral():
    # concave kite-like shape; analytic trigonometric parametrization
    def g(t):
        th = np.pi * t
        return (np.cos(th) + 0.65 * np.cos(2 * th) - 0.65) + 1.5j * np.sin(th)

    return ParametricCurve(g, name="corral")


def _sharktooth():
    # two corner singularities at t = 0 and t = +-1; qualitative stand-in
    return ParametricCurve(
        lambda t: (1 + 0.25 * np.abs(np.sin(np.pi * t))) * np.exp(1j * np.pi * t),
        analytic_hint=False,
        name="sharktooth",
    )


def _pacman():
    # smoothed radial slit: depth 0.85, angular width ~0.15; qualitative stand-in
    def g(t):
        th = np.pi * t
        r = 1 - 0.85 * np.exp(-((th / 0.075) ** 2))
        return r * np.exp(1j * th)

    return ParametricCurve(g, analytic_hint=False, name="pacman")


LIBRARY = {
    "circle": _circle,
    "ellipse": _ellipse,
    "starfish": _starfish,
    "trefoil": _trefoil,
    "crescent_gc": _crescent_gc,
    "corral": _corral,
    "sharktooth": _sharktooth,
    "pacman": _pacman,
}


def random_jordan(seed, n_modes: int = 6, decay: float = 1.7) -> ParametricCurve:
    """Random smooth Jordan curve, rejection-sampled until simple and non-degenerate.

    Radius 1 + sum_m a_m cos(m pi t + phi_m) with |a_m| <= 0.45 m^-decay.
    Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    for _ in range(50):
        amp = rng.uniform(-1.0, 1.0, n_modes) * 0.45 * np.arange(1, n_modes + 1) ** -decay
        phase = rng.uniform(0.0, 2 * np.pi, n_modes)

        def g(t, amp=amp, phase=phase):
            th = np.pi * np.asarray(t, dtype=float)
            r = 1.0 + sum(
                amp[m] * np.cos((m + 1) * th + phase[m]) for m in range(len(amp))
            )
            return r * np.exp(1j * th)

        curve = ParametricCurve(g, name=f"random:seed={seed}")
        if curve.is_simple() and curve.min_speed() > 0.05:
            return curve
    raise CurveError("random_jordan: 50 rejections; parameters too aggressive")


def make_curve(spec: str) -> ParametricCurve:
    """Build a library curve from a spec string like 'starfish' or 'random:seed=42'.

    Parameters after the colon are comma-separated key=value pairs.
    """
    name, _, rest = str(spec).partition(":")
    name = name.strip().lower()
    kwargs = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not _:
                raise CurveError(f"malformed curve parameter {item!r}")
            kwargs[key.strip()] = val.strip()
    if name == "random":
        seed = int(kwargs.pop("seed", 0))
        extra = {
            k: (int(v) if k == "n_modes" else float(v)) for k, v in kwargs.items()
        }
        return random_jordan(seed, **extra)
    if name not in LIBRARY:
        raise CurveError(f"unknown curve {name!r}; known: {sorted(LIBRARY)} and 'random'")
    curve = LIBRARY[name](**{k: float(v) for k, v in kwargs.items()})
    return curve.validate()
