"""Radial cutoff on C^m and the quadrature behind the extension integral.

The cutoff is ``psi(w) = norm * exp(-1/(1 - |w|^2/eps^2))`` on ``|w| < eps``.
Integrals over the ball ``|z - v| <= eps|v|`` use origin-centred polar
coordinates ``z = r * omega`` so that sets ``{|z| < rho}``, where the
truncation index of the extension changes, are radial slabs.  On the sphere
``omega = cos(b) vhat + sin(b) sigma`` with ``sigma`` orthogonal to ``vhat``;
the ball cuts out the cap ``b <= b_max(r)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from .jets import MultiIndex, multi_indices
from .tps import TPS

log = logging.getLogger(__name__)

D_QUAD = 8
TRUNC_CAP = 40


class MollifierError(ValueError):
    """Invalid cutoff parameters or integration centre."""


def _bump_profile(s):
    """``exp(-1/(1 - s))`` for ``s < 1``, zero elsewhere; ``s`` may be a TPS."""
    if isinstance(s, TPS):
        s0 = s.value
        inside = s0 < 1
        safe = s + np.where(inside, 0.0, -s0)
        return (-1.0 / (1.0 - safe)).exp().where(inside, 0.0)
    s = np.asarray(s, dtype=float)
    inside = s < 1
    with np.errstate(divide="ignore", over="ignore"):
        val = np.exp(-1.0 / (1.0 - np.where(inside, s, 0.0)))
    return np.where(inside, val, 0.0)


class RadialCutoff:
    """Normalized radial bump ``psi`` on ``C^m`` supported in ``|w| < eps``."""

    def __init__(self, m: int, eps: float):
        if m not in (1, 2):
            raise MollifierError(f"only m in (1, 2) supported, got {m}")
        if not 0 < eps < 1:
            raise MollifierError(f"eps must lie in (0, 1), got {eps}")
        self.m = m
        self.eps = eps
        area = 2 * math.pi ** m / math.gamma(m)  # |S^(2m-1)|
        g = lambda t: math.exp(-1.0 / (1.0 - t * t)) * t ** (2 * m - 1) if t < 1 else 0.0
        val, err = quad(g, 0.0, 1.0, epsabs=1e-16, epsrel=1e-13, limit=200)
        x, w = np.polynomial.legendre.leggauss(120)
        t = 0.5 * (x + 1)
        gl = 0.5 * float(np.sum(w * _bump_profile(t * t) * t ** (2 * m - 1)))
        mass = area * eps ** (2 * m) * val
        self.norm_const = 1.0 / mass
        self.quad_error = max(err, abs(gl - val)) / val

    def __repr__(self) -> str:
        return f"RadialCutoff(m={self.m}, eps={self.eps})"

    def __call__(self, w) -> np.ndarray:
        """``psi`` at complex points ``w`` of shape (m, *batch)."""
        w = np.asarray(w)
        r2 = np.sum(np.abs(w) ** 2, axis=0)
        return self.norm_const * _bump_profile(r2 / self.eps ** 2)

    def profile(self, rho, order: int = 0) -> np.ndarray:
        """``d^order/drho^order`` of the radial profile, ``order <= 4``."""
        if order > 4:
            raise MollifierError("profile derivatives are served up to order 4")
        rho = np.asarray(rho, dtype=float)
        x = TPS.variable(1, order, 0, rho)
        p = _bump_profile(x * x / self.eps ** 2) * self.norm_const
        return p.derivative_value((order,))

    def kernel(self, z, v, order: int = 0) -> Dict[MultiIndex, np.ndarray]:
        """``d_v^beta {|v|^(-2m) psi((z - v)/|v|)}`` for ``|beta| <= order``.

        ``z`` has shape (m, N) (complex nodes), ``v`` is a real m-vector.
        """
        m = self.m
        v = np.asarray(v, dtype=float).reshape(m)
        z = np.asarray(z)
        vs = TPS.variables(order, [np.full(z.shape[1:], v[l]) for l in range(m)])
        q = None
        n2 = None
        for l in range(m):
            d = (z[l].real - vs[l]) * (z[l].real - vs[l]) + z[l].imag ** 2
            q = d if q is None else q + d
            n2 = vs[l] * vs[l] if n2 is None else n2 + vs[l] * vs[l]
        s = q / (n2 * self.eps ** 2)
        K = _bump_profile(s) * self.norm_const * (n2 ** (-m) if m > 1 else n2.reciprocal())
        return {b: K.derivative_value(b) for b in multi_indices(m, order)}


def build_cutoff(m: int, eps: float) -> RadialCutoff:
    return RadialCutoff(m, eps)


# quadrature ----------------------------------------------------------------

@dataclass
class ShellQuadrature:
    """Nodes and ``dlambda`` weights covering part of the ball ``|z - v| <= eps|v|``."""

    nodes: np.ndarray  # (m, N) complex
    weights: np.ndarray  # (N,)
    center: np.ndarray
    radius: float
    r_range: Tuple[float, float]

    def integrate(self, values) -> complex:
        return complex(math.fsum(np.real(self.weights * values))
                       + 1j * math.fsum(np.imag(self.weights * values)))


def centered_ball_quadrature(m: int, v, radius: float, degree: int = D_QUAD,
                             n_rho: int = 64) -> ShellQuadrature:
    """Tensor polar rule on the ball ``|z - v| <= radius`` centred at ``v``.

    Radial Gauss-Legendre times an angular rule that is exact for real
    polynomials of total degree ``degree``; with ``n_rho`` radial nodes the
    rule is exact for polynomials up to degree ``2 n_rho - 2m``.
    """
    v = np.asarray(v, dtype=complex).reshape(m)
    x, w = np.polynomial.legendre.leggauss(n_rho)
    rho = 0.5 * radius * (x + 1)
    wr = 0.5 * radius * w * rho ** (2 * m - 1)
    n_ang = degree + 2
    phi = 2 * np.pi * np.arange(n_ang) / n_ang
    wphi = np.full(n_ang, 2 * np.pi / n_ang)
    if m == 1:
        om = np.exp(1j * phi)[None, :]  # (1, n_ang)
        wom = wphi
    else:
        t, wt = np.polynomial.legendre.leggauss(degree // 2 + 2)
        t = 0.5 * (t + 1)
        wt = 0.25 * wt  # dt/2 on [0, 1] with measure (1/2) dt dphi1 dphi2
        Tt, P1, P2 = np.meshgrid(t, phi, phi, indexing="ij")
        om = np.stack([np.sqrt(1 - Tt) * np.exp(1j * P1), np.sqrt(Tt) * np.exp(1j * P2)])
        om = om.reshape(2, -1)
        wom = (wt[:, None, None] * wphi[None, :, None] * wphi[None, None, :]).ravel()
    nodes = v[:, None, None] + rho[None, :, None] * om[:, None, :]
    weights = wr[:, None] * wom[None, :]
    return ShellQuadrature(nodes.reshape(m, -1), weights.ravel(), v.real, radius, (0.0, radius))


def _complement_frame(vhat: np.ndarray) -> np.ndarray:
    """Real-orthonormal basis of the complement of ``vhat`` in C^m = R^(2m)."""
    m = vhat.size
    if m == 1:
        return np.array([[1j * vhat[0]]])
    a, b = vhat
    perp = np.array([-b, a], dtype=complex)
    return np.array([perp, 1j * vhat.astype(complex), 1j * perp])


def _sphere_rule(m: int, degree: int):
    """Points and weights on S^(2m-2), exact for polynomials up to ``degree``."""
    if m == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    n_phi = degree // 2 + 2
    n_chi = degree + 2
    c, wc = np.polynomial.legendre.leggauss(n_phi)
    chi = 2 * np.pi * np.arange(n_chi) / n_chi
    C, X = np.meshgrid(c, chi, indexing="ij")
    S = np.sqrt(1 - C ** 2)
    pts = np.stack([C.ravel(), (S * np.cos(X)).ravel(), (S * np.sin(X)).ravel()], axis=1)
    w = np.outer(wc, np.full(n_chi, 2 * np.pi / n_chi)).ravel()
    return pts, w


def ball_quadrature(m: int, v, eps: float, r_range: Optional[Tuple[float, float]] = None,
                    n_r: int = 48, n_beta: int = 48, degree: int = 44) -> ShellQuadrature:
    """Polar rule for ``{|z - v| <= eps|v|} ∩ {r_lo <= |z| <= r_hi}``.

    ``degree`` is the polynomial degree in ``z`` the sphere factor must
    integrate exactly (it only matters for ``m = 2``).
    """
    v = np.asarray(v, dtype=float).reshape(m)
    nv = float(np.linalg.norm(v))
    if nv == 0:
        raise MollifierError("integration centre v must be nonzero")
    lo, hi = (1 - eps) * nv, (1 + eps) * nv
    if r_range is not None:
        lo, hi = max(lo, r_range[0]), min(hi, r_range[1])
    vhat = v / nv
    if hi <= lo:
        return ShellQuadrature(np.zeros((m, 0), complex), np.zeros(0), v, eps * nv, (lo, hi))
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * (hi - lo) * (xr + 1) + lo
    wr = 0.5 * (hi - lo) * wr
    cosb = (r ** 2 + nv ** 2 * (1 - eps ** 2)) / (2 * r * nv)
    bmax = np.arccos(np.clip(cosb, -1.0, 1.0))
    xb, wb = np.polynomial.legendre.leggauss(n_beta)
    beta = 0.5 * bmax[:, None] * (xb[None, :] + 1)  # (n_r, n_beta)
    wbeta = 0.5 * bmax[:, None] * wb[None, :]
    sig, wsig = _sphere_rule(m, degree)
    comp = _complement_frame(vhat)  # (2m-1, m)
    sigma = sig @ comp  # (n_sig, m) complex
    R = r[:, None, None]
    B = beta[:, :, None]
    z = R[..., None] * (np.cos(B)[..., None] * vhat + np.sin(B)[..., None] * sigma[None, None])
    w = (wr[:, None, None] * R ** (2 * m - 1) * wbeta[:, :, None]
         * np.sin(B) ** (2 * m - 2) * wsig[None, None, :])
    nodes = z.reshape(-1, m).T
    return ShellQuadrature(nodes, w.ravel(), v, eps * nv, (lo, hi))


def _monomial(z: np.ndarray, alpha: Sequence[int]) -> np.ndarray:
    out = np.ones(z.shape[1:], dtype=complex)
    for l, a in enumerate(alpha):
        if a:
            out = out * z[l] ** a
    return out


def reproduce_polynomial(psi: RadialCutoff, P: Callable, v, degree: int = D_QUAD,
                         n_rho: int = 64) -> complex:
    """``|v|^(-2m) * integral of psi((z - v)/|v|) P(z)``; equals ``P(v)``."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if not np.any(v):
        raise MollifierError("v must be nonzero")
    q = centered_ball_quadrature(psi.m, v, psi.eps * float(np.linalg.norm(v)), degree, n_rho)
    K = psi.kernel(q.nodes, v, 0)[(0,) * psi.m]
    return q.integrate(K * P([q.nodes[l] for l in range(psi.m)]))


def mollified_series(psi: RadialCutoff, coeffs: Dict[MultiIndex, complex], v,
                     trunc: Callable, breaks: Iterable[float] = (), n: int = 48) -> complex:
    """``|v|^(-2m) * integral of psi((z-v)/|v|) sum_{|a| <= trunc(|z|)} f_a z^a``.

    The truncation index is evaluated per node.  Radii in ``breaks`` where
    ``trunc`` jumps split the radial rule so each piece is smooth.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    nv = float(np.linalg.norm(v))
    if nv == 0:
        raise MollifierError("v must be nonzero")
    lo, hi = (1 - psi.eps) * nv, (1 + psi.eps) * nv
    cuts = sorted({lo, hi, *[b for b in breaks if lo < b < hi]})
    total = 0j
    for a, b in zip(cuts[:-1], cuts[1:]):
        q = ball_quadrature(psi.m, v, psi.eps, (a, b), n_r=n, n_beta=n)
        if q.weights.size == 0:
            continue
        K = psi.kernel(q.nodes, v, 0)[(0,) * psi.m]
        rad = np.linalg.norm(np.abs(q.nodes), axis=0)
        N = np.minimum(np.asarray(trunc(rad)), TRUNC_CAP)
        s = np.zeros(q.weights.shape, dtype=complex)
        for alpha, c in coeffs.items():
            if c == 0:
                continue
            s += np.where(sum(alpha) <= N, c * _monomial(q.nodes, alpha), 0.0)
        total += q.integrate(K * s)
    return total


def slab_moments(psi: RadialCutoff, v, cuts: Sequence[float], degree: int, order: int,
                 n: int = 48) -> Tuple[list, Dict[MultiIndex, np.ndarray]]:
    """Moments ``sum_nodes w d_v^b K(z, v) z^a`` on radial slabs.

    ``cuts`` are increasing radii inside the annulus of the ball.  Returns the
    slab list and ``moments[(a, b)]`` as an array over slabs.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    m = psi.m
    nv = float(np.linalg.norm(v))
    lo, hi = (1 - psi.eps) * nv, (1 + psi.eps) * nv
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    alphas = multi_indices(m, degree)
    betas = multi_indices(m, order)
    out = {(a, b): np.zeros(len(edges) - 1, dtype=complex) for a in alphas for b in betas}
    slabs = list(zip(edges[:-1], edges[1:]))
    for i, (a_lo, a_hi) in enumerate(slabs):
        q = ball_quadrature(m, v, psi.eps, (a_lo, a_hi), n_r=n, n_beta=n, degree=degree + 2)
        if q.weights.size == 0:
            continue
        Kd = psi.kernel(q.nodes, v, order)
        if m == 1:
            zp = q.nodes[0][None, :] ** np.arange(degree + 1)[:, None]
            mono = {(k,): zp[k] for k in range(degree + 1)}
        else:
            mono = {a: _monomial(q.nodes, a) for a in alphas}
        for b in betas:
            wk = q.weights * Kd[b]
            for a in alphas:
                out[(a, b)][i] = np.sum(wk * mono[a])
    return slabs, out
