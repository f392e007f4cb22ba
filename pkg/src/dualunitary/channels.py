"""Correlation channels of a two-qudit gate, their spectra and the ergodic hierarchy.

The single-site correlations of a brickwork circuit along the two light-cone
rays are generated by the superoperators (row-vectorization convention)

    M_plus[U]  = (U^T2 U^T2^dag)^R1 / q        acts as  a -> tr_1[U^dag (a x 1) U]/q
    M_minus[U] = (U^T2^dag U^T2)^R2 / q        acts as  a -> tr_2[U^dag (1 x a) U]/q

Both are unital CPTP maps; |Phi+> is always a fixed point (the trivial mode).
Deflating it isolates the nontrivial spectrum, whose moduli set the decay
rates mu_k = -ln|lambda_k| and the five-class ergodic hierarchy, and whose
Frobenius norm ties to the entangling power:  for dual U,

    ||Mtilde_plus[U]||^2 = (q^2-1)(1 - e_p(U)).
"""

import cmath
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .invariants import classify_duality, entangling_power
from .tensor_ops import (
    devectorize,
    local_dim,
    max_entangled_vector,
    partial_transpose_t2,
    realign_r1,
    realign_r2,
    require_unitary,
    vectorize,
)

# |lambda| below this is an exact-zero mode (instant mixing, infinite rate)
ZERO_TOL = 1e-9
# |lambda| above 1 - UNIT_TOL counts as a non-decaying unit-modulus mode
UNIT_TOL = 1e-9
# proximity to unit modulus that triggers a boundary flag on classification
BOUNDARY_TOL = 1e-6

UNITALITY_TOL = 1e-12

ERGODIC_CLASSES = (
    "NonInteracting",
    "NonErgodic",
    "ErgodicNonMixing",
    "ErgodicMixing",
    "Bernoulli",
)


@dataclass
class ChannelSpectrum:
    q: int
    side: str
    eigenvalues: np.ndarray   # the q^2-1 nontrivial eigenvalues, |.| descending
    rates: np.ndarray         # mu_k = -ln|lambda_k|, inf for zero modes

    @property
    def spectral_radius(self):
        return float(abs(self.eigenvalues[0])) if self.eigenvalues.size else 0.0


@dataclass
class ErgodicReport:
    label: str
    unit_count: int          # modes with |lambda| at unit modulus
    one_count: int           # modes with lambda = 1
    zero_count: int          # modes below the zero tolerance
    total: int
    boundary: bool = False


def build_m_plus(U, tol=1e-8):
    """Superoperator of a -> tr_1[U^dag (a x 1) U]/q."""
    U = require_unitary(np.asarray(U, dtype=complex), tol=tol, what="gate")
    q = local_dim(U)
    T = partial_transpose_t2(U)
    return realign_r1(T @ T.conj().T) / q


def build_m_minus(U, tol=1e-8):
    """Superoperator of a -> tr_2[U^dag (1 x a) U]/q."""
    U = require_unitary(np.asarray(U, dtype=complex), tol=tol, what="gate")
    q = local_dim(U)
    T = partial_transpose_t2(U)
    return realign_r2(T.conj().T @ T) / q


def apply_channel(M, rho):
    """Action of a vectorized channel on a density matrix."""
    return devectorize(np.asarray(M) @ vectorize(rho))


def unitality_residual(M):
    """How far M is from fixing |Phi+> on both sides (max of the two)."""
    M = np.asarray(M)
    q = local_dim(M)
    phi = max_entangled_vector(q)
    right = np.abs(M @ phi - phi).max()
    left = np.abs(phi.conj() @ M - phi.conj()).max()
    return float(max(right, left))


def deflate_trivial(M, tol=UNITALITY_TOL):
    """Remove the trivial mode: Mtilde = M - |Phi+><Phi+|."""
    M = np.asarray(M, dtype=complex)
    r = unitality_residual(M)
    if r > tol:
        raise ValueError(f"channel is not unital: trivial-mode residual {r:.3e}")
    q = local_dim(M)
    phi = max_entangled_vector(q)
    return M - np.outer(phi, phi.conj())


def _sort_desc(vals):
    # modulus descending; ties broken by descending real then imaginary part
    idx = np.lexsort((-vals.imag, -vals.real, -np.abs(vals)))
    return vals[idx]


def eigvals_schur(A):
    """Eigenvalues from the (balanced) complex Schur form."""
    T, _ = scipy.linalg.schur(np.asarray(A, dtype=complex), output="complex")
    return np.diag(T).copy()


def eigvals_companion(A):
    """Cross-check path: characteristic polynomial by Faddeev-LeVerrier,
    roots from the companion matrix.  Only sensible for small matrices."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    Mk = np.zeros_like(A)
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(A @ Mk) / k
    return np.roots(coeffs)


def channel_spectrum(M, side="plus", deflated=False):
    """Nontrivial spectrum of a unital channel, sorted, with decay rates.

    The trivial mode is always deflated before the eigensolve so the leading
    eigenvalue is never contaminated by it, even when the spectrum is
    degenerate at 1.  The smallest-modulus eigenvalue of the deflated matrix
    (the deflated trivial mode, an exact zero) is dropped.
    """
    Mt = np.asarray(M, dtype=complex) if deflated else deflate_trivial(M)
    q = local_dim(Mt)
    vals = _sort_desc(eigvals_schur(Mt))[: q * q - 1]
    mods = np.abs(vals)
    rates = np.where(mods < ZERO_TOL, np.inf, -np.log(np.where(mods < ZERO_TOL, 1.0, mods)))
    return ChannelSpectrum(q=q, side=side, eigenvalues=vals, rates=rates)


def classify_ergodicity(spec_plus, spec_minus, zero_tol=ZERO_TOL, unit_tol=UNIT_TOL,
                        boundary_tol=BOUNDARY_TOL):
    """Five-way ergodic class from the nontrivial spectra of both channels."""
    lam = np.concatenate([spec_plus.eigenvalues, spec_minus.eigenvalues])
    mods = np.abs(lam)
    one_count = int(np.count_nonzero(np.abs(lam - 1.0) <= unit_tol))
    unit_count = int(np.count_nonzero(mods >= 1.0 - unit_tol))
    zero_count = int(np.count_nonzero(mods <= zero_tol))
    total = lam.size

    if one_count == total:
        label = "NonInteracting"
    elif one_count > 0:
        label = "NonErgodic"
    elif unit_count > 0:
        label = "ErgodicNonMixing"
    elif zero_count == total:
        label = "Bernoulli"
    else:
        label = "ErgodicMixing"

    # a spectrum is "boundary" when any mode sits within boundary_tol of unit
    # modulus: the NonErgodic / ErgodicNonMixing split is tolerance-sensitive
    boundary = bool(np.any(np.abs(mods - 1.0) <= boundary_tol))
    return ErgodicReport(label=label, unit_count=unit_count, one_count=one_count,
                         zero_count=zero_count, total=total, boundary=boundary)


def classify_gate(U):
    """Convenience: ergodic class of the circuit built from U."""
    sp = channel_spectrum(build_m_plus(U), side="plus")
    sm = channel_spectrum(build_m_minus(U), side="minus")
    return classify_ergodicity(sp, sm)


def check_norm_and_bounds(U, dual_tol=1e-8, slack_tol=1e-9):
    """Norm identity and the eigenvalue bounds for a dual-unitary gate.

    Returns the residual of ||Mtilde_plus||^2 = (q^2-1)(1-e_p) and the slack
    of every bound |lambda_k| <= sqrt(1-e_p) sqrt((q^2-1)/k); negative slack
    beyond slack_tol means a violation.
    """
    U = np.asarray(U, dtype=complex)
    q = local_dim(U)
    dc = classify_duality(U, tol=dual_tol)
    if not dc.is_dual:
        raise ValueError(f"gate is not dual-unitary (defect {dc.residuals['dual']:.3e})")

    ep = entangling_power(U)
    Mt = deflate_trivial(build_m_plus(U))
    norm_sq = float(np.vdot(Mt, Mt).real)
    expected = (q * q - 1) * (1.0 - ep)

    spec = channel_spectrum(Mt, deflated=True)
    mods = np.abs(spec.eigenvalues)
    k = np.arange(1, q * q)
    bound = np.sqrt(max(1.0 - ep, 0.0)) * np.sqrt((q * q - 1) / k)
    slack = bound - mods
    return {
        "q": q,
        "e_p": ep,
        "norm_sq": norm_sq,
        "norm_sq_expected": expected,
        "norm_residual": abs(norm_sq - expected),
        "slack": slack,
        "min_slack": float(slack.min()),
        "smallest_eig_slack": float(np.sqrt(max(1.0 - ep, 0.0)) - mods[-1]),
        "ok": bool(slack.min() >= -slack_tol),
    }


def lightcone_correlation_prediction(U, a_i, a_j, t, side="plus"):
    """Light-cone correlation C_(+/-)(+/-t, t) = tr[M^(2t)(a_i) a_j]/q."""
    q = local_dim(U)
    M = build_m_plus(U) if side == "plus" else build_m_minus(U)
    v = vectorize(np.asarray(a_i, dtype=complex))
    v = np.linalg.matrix_power(M, 2 * t) @ v
    return complex(np.trace(devectorize(v) @ np.asarray(a_j))) / q


def inhomogeneous_bound(gates, dual_tol=1e-8):
    """Disorder-averaged squared-correlation bound for a sequence of dual gates.

    The bound after applying the listed gates once each is
    (q^2-1) * prod_k (1 - e_p(U_k)); when all gates coincide the decay is
    exponential with rate gamma = -ln(1-e_p)^2 per time step (two gate layers).
    """
    gates = [np.asarray(U, dtype=complex) for U in gates]
    if not gates:
        raise ValueError("need at least one gate")
    q = local_dim(gates[0])
    eps = []
    for U in gates:
        if not classify_duality(U, tol=dual_tol).is_dual:
            raise ValueError("all gates must be dual-unitary")
        eps.append(entangling_power(U))
    bound = (q * q - 1) * float(np.prod([1.0 - e for e in eps]))
    gamma = None
    if all(np.array_equal(g, gates[0]) for g in gates[1:]):
        x = 1.0 - eps[0]
        gamma = float("inf") if x <= 0 else -2.0 * cmath.log(x).real
    return {"q": q, "e_p": eps, "bound": bound, "gamma": gamma}
