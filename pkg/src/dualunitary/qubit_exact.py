"""Closed forms for the one-parameter qubit dual family and its channel spectra.

Every two-qubit dual-unitary gate is locally equivalent to

    U(J) = swap . diag(e^{-iJ}, -i e^{iJ}, -i e^{iJ}, e^{-iJ}),   J in [0, pi/4],

whose bare channel is diag(1, sin 2J, sin 2J, 1) and whose entangling power is
e_p = (2/3) cos^2(2J).  Rotating the channel with restricted single-qubit
families keeps the nontrivial spectrum solvable:

  * the "w" family (real diagonal, phi = 0) gives a quadratic pair plus the
    constant root sin 2J, a critical angle theta_c where the pair turns
    complex with modulus sqrt(sin 2J), and hence
        nu'  = -1/4 ln(1 - e_p/e_max),   mu' = (1-sin2J)/(1+sin2J);
  * the "v" family (theta = pi/2) gives a cubic whose minimal spectral radius
    over phi is sin^{2/3}(2J) at phi = pi/2, hence
        nu   = -1/3 ln(1 - e_p/e_max),
    which numerically also matches the optimum over all of SU(2).
"""

import cmath
import math

import numpy as np

from .tensor_ops import swap_operator

E_P_MAX_QUBIT = 2.0 / 3.0


def cartan_diagonal(J):
    """diag(e^{-iJ}, -i e^{iJ}, -i e^{iJ}, e^{-iJ})."""
    a = cmath.exp(-1j * J)
    b = -1j * cmath.exp(1j * J)
    return np.diag([a, b, b, a])


def cartan_gate(J):
    """The dual two-qubit gate U(J) = S D(J); J = pi/4 is swap-like, J = 0 dcnot-like."""
    return swap_operator(2) @ cartan_diagonal(J)


def cartan_channel_diag(J):
    """Bare channel of U(J): diag(1, sin 2J, sin 2J, 1)."""
    s = math.sin(2 * J)
    return np.diag([1.0, s, s, 1.0]).astype(complex)


def ep_cartan(J):
    """e_p(U(J)) = (2/3) cos^2(2J)."""
    return (2.0 / 3.0) * math.cos(2 * J) ** 2


def su2_local(theta, phi, psi):
    """General single-qubit gate; theta in [0, pi], phi, psi in [0, 4 pi]."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c * cmath.exp(1j * phi / 2), -cmath.exp(1j * psi / 2) * s],
            [cmath.exp(-1j * psi / 2) * s, c * cmath.exp(-1j * phi / 2)],
        ]
    )


def w_local(theta, psi=0.0):
    """Restricted family with phi = 0 (real diagonal)."""
    return su2_local(theta, 0.0, psi)


def v_local(phi, psi=0.0):
    """Restricted family with theta = pi/2 (flat moduli)."""
    return su2_local(math.pi / 2, phi, psi)


def restricted_w_spectrum(J, theta):
    """The three nontrivial channel eigenvalues for a w-family local."""
    s = math.sin(2 * J)
    c = math.cos(theta)
    disc = cmath.sqrt((1 + s) ** 2 * c * c - 4 * s)
    lam1 = 0.5 * ((1 + s) * c + disc)
    lam2 = 0.5 * ((1 + s) * c - disc)
    return np.array([lam1, lam2, complex(s)])


def critical_theta(J):
    """Angle where the w-family eigenvalue pair coalesces and turns complex."""
    s = math.sin(2 * J)
    return math.acos(2 * math.sqrt(s) / (1 + s))


def nu_prime(J):
    """Maximal mixing rate over the w family: -1/2 ln sin 2J."""
    s = math.sin(2 * J)
    return math.inf if s == 0 else -0.5 * math.log(s)


def mu_prime(J):
    """Mean mixing rate over the w family with cos(theta) uniform."""
    s = math.sin(2 * J)
    return (1 - s) / (1 + s)


def nu_plus_exact(J):
    """Maximal mixing rate over the v family, -ln sin^{2/3}(2J); numerically
    the optimum over all single-qubit gates."""
    s = math.sin(2 * J)
    return math.inf if s == 0 else -(2.0 / 3.0) * math.log(s)


def _cardano(a2, a1, a0, disc_tol=1e-12):
    """Roots of x^3 + a2 x^2 + a1 x + a0; companion fallback near the
    discriminant's zero where the trigonometric branch loses digits."""
    a2, a1, a0 = complex(a2), complex(a1), complex(a0)
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if abs(disc) < disc_tol:
        return np.roots([1.0, a2, a1, a0])
    sq = cmath.sqrt(disc)
    u3 = -q / 2.0 + sq
    if abs(u3) < disc_tol:
        u3 = -q / 2.0 - sq
    u = u3 ** (1.0 / 3.0)
    w = cmath.exp(2j * math.pi / 3.0)
    roots = []
    for k in range(3):
        uk = u * w**k
        roots.append(uk - p / (3.0 * uk) - a2 / 3.0)
    return np.array(roots)


def restricted_v_cubic(J, phi):
    """Nontrivial channel eigenvalues for a v-family local:
    roots of x^3 - cos(phi) sin(2J) x^2 + cos(phi) sin(2J) x - sin^2(2J)."""
    s = math.sin(2 * J)
    c = math.cos(phi)
    return _cardano(-c * s, c * s, -s * s)


def general_su2_cubic(J, theta, phi):
    """Nontrivial channel eigenvalues for a general single-qubit local."""
    s = math.sin(2 * J)
    c2 = math.cos(theta / 2) ** 2
    a2 = 1.0 - 2.0 * c2 * (s * math.cos(phi) + 1.0)
    a1 = s * (2.0 * c2 * (s + math.cos(phi)) - s)
    a0 = -s * s
    return _cardano(a2, a1, a0)


def min_lambda1_general(J, grid=96, refine=40):
    """Smallest spectral radius over (theta, phi) from the general cubic.

    Coarse grid then coordinate shrink; the closed-form reference is
    sin^{2/3}(2J).
    """
    def radius(theta, phi):
        return float(np.abs(general_su2_cubic(J, theta, phi)).max())

    thetas = np.linspace(0.0, math.pi, grid)
    phis = np.linspace(0.0, math.pi, grid)
    best = (math.inf, 0.0, 0.0)
    for th in thetas:
        for ph in phis:
            r = radius(th, ph)
            if r < best[0]:
                best = (r, th, ph)
    r, th, ph = best
    dth = thetas[1] - thetas[0]
    dph = phis[1] - phis[0]
    for _ in range(refine):
        improved = False
        for nth, nph in ((th + dth, ph), (th - dth, ph), (th, ph + dph), (th, ph - dph)):
            rn = radius(min(max(nth, 0.0), math.pi), nph)
            if rn < r:
                r, th, ph = rn, min(max(nth, 0.0), math.pi), nph
                improved = True
        if not improved:
            dth *= 0.5
            dph *= 0.5
    return {"min_radius": r, "theta": th, "phi": ph,
            "closed_form": math.sin(2 * J) ** (2.0 / 3.0) if J > 0 else 0.0}
