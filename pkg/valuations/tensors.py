"""
Minkowski tensors of polytopes, total (generalized) tensorial curvature measures, the McMullen
relations between them and the Steiner polynomial.

For a polytope P and 0 <= j < n,

    Phi_j^{r,s}(P) = sum over j-faces F of Upsilon_r(F) Theta_s(P, F),

and Phi_n^{r,0}(P) is the volume moment. Indices outside the defined range give zero tensors.
"""
import math
from dataclasses import dataclass

from coefficients.exact import sphere_constants
from symtensor.tensors import SymTensor, combine, metric_of_subspace, sym_product

from .cones import theta, theta_is_exact
from .moments import face_upsilon, volume_moment


@dataclass(frozen=True)
class MinkowskiTensorValue:
    """A Minkowski tensor (i = 0) or a total generalized tensorial curvature measure (i = 1)."""
    j: int
    r: int
    s: int
    value: SymTensor
    i: int = 0
    exact: bool = True

    def to_dict(self):
        return {
            'j': self.j,
            'r': self.r,
            's': self.s,
            'i': self.i,
            'exact': self.exact,
            'rank': self.value.rank,
            'coefficients': self.value.to_list(),
        }


def _ambient_dim(P, dim):
    if P.is_empty:
        if dim is None:
            raise ValueError("The ambient dimension is required for an empty polytope.")
        return dim
    return P.dim_ambient


def _faces(P, j):
    return P.faces[j] if 0 <= j <= P.lattice_dim else []


def _face_sum(P, j, r, s, weight=None):
    """Sum over j-faces of weight(F) * Upsilon_r(F) * Theta_s(P, F), with its exactness flag."""
    n = P.dim_ambient
    rank = r + s + (2 if weight else 0)
    terms, exact = [], True
    for face in _faces(P, j):
        factors = [face_upsilon(P, face, r), theta(P, face, s)]
        if weight:
            factors.insert(0, weight(face))
        terms.append((1.0, sym_product(*factors)))
        exact = exact and theta_is_exact(P, face, s)
    return combine(terms, dim=n, rank=rank), exact


def _out_of_range(n, j, r, s):
    return j < 0 or j > n or r < 0 or s < 0 or (j == n and s != 0)


def minkowski_tensor(P, j, r, s, dim=None):
    """
    Phi_j^{r,s}(P).

    Args:
        P: a Polytope, or EMPTY together with ``dim``.
        dim: ambient dimension, only needed for the empty set.
    """
    n = _ambient_dim(P, dim)
    if P.is_empty or _out_of_range(n, j, r, s):
        return MinkowskiTensorValue(j, r, s, SymTensor.zeros(n, max(r + s, 0)))
    if j == n:
        return MinkowskiTensorValue(j, r, s, volume_moment(P, r))
    value, exact = _face_sum(P, j, r, s)
    return MinkowskiTensorValue(j, r, s, value, exact=exact)


def phi(P, j, r, s, dim=None):
    """The SymTensor of :func:`minkowski_tensor`."""
    return minkowski_tensor(P, j, r, s, dim).value


def intrinsic_volumes(P, dim=None):
    """(V_0, ..., V_n) with V_j = Phi_j^{0,0}."""
    n = _ambient_dim(P, dim)
    return [phi(P, j, 0, 0, n).value for j in range(n + 1)]


def gen_tcm_total(P, j, r, s, dim=None):
    """
    Total generalized tensorial curvature measure

        phi_j^{r,s,1}(P, R^n) = 2 pi / j * sum over j-faces F of Q(F) Upsilon_r(F) Theta_s(P, F),

    where Q(F) is the metric tensor of the direction space of F. Defined for 1 <= j <= n - 1.
    """
    n = _ambient_dim(P, dim)
    if not 1 <= j <= n - 1:
        raise ValueError(f"Generalized tensorial curvature measures need 1 <= j <= {n - 1}, got j={j}.")
    rank = max(r + s + 2, 0)
    if P.is_empty or r < 0 or s < 0:
        return MinkowskiTensorValue(j, r, s, SymTensor.zeros(n, rank), i=1)
    value, exact = _face_sum(P, j, r, s, weight=lambda face: metric_of_subspace(face.basis, n))
    return MinkowskiTensorValue(j, r, s, value.scale(2 * math.pi / j), i=1, exact=exact)


def tcm_total(P, j, r, s, i=0, dim=None):
    """phi_j^{r,s,i}(P, R^n): the Minkowski tensor for i = 0, the generalized measure for i = 1."""
    if i == 0:
        return minkowski_tensor(P, j, r, s, dim)
    if i == 1:
        return gen_tcm_total(P, j, r, s, dim)
    raise ValueError(f"i must be 0 or 1, got {i}.")


def mcmullen_sides(P, k, r, s):
    """
    Both sides of the McMullen relation

        2 pi s Phi_k^{r,s}(P) = sum over F in F_k of Q(F^perp) Upsilon_r(F) Theta_{s-2}(P, F)
                                + sum over G in F_(k+1) of Q(G) Upsilon_{r-1}(G) Theta_{s-1}(P, G).
    """
    n = P.dim_ambient
    if not 0 <= k <= n:
        raise ValueError(f"Need 0 <= k <= {n}, got k={k}.")
    rank = max(r + s, 0)
    lhs = phi(P, k, r, s).scale(2 * math.pi * s)
    terms = []
    if s >= 2 and r >= 0:
        for face in _faces(P, k):
            normal_metric = metric_of_subspace(face.normal_space, n)
            terms.append((1.0, sym_product(normal_metric, face_upsilon(P, face, r), theta(P, face, s - 2))))
    if s >= 1 and r >= 1:
        for face in _faces(P, k + 1):
            terms.append((1.0, sym_product(
                metric_of_subspace(face.basis, n), face_upsilon(P, face, r - 1), theta(P, face, s - 1),
            )))
    rhs = combine(terms, dim=n, rank=rank)
    return lhs, rhs


def mcmullen_residual(P, k, r, s):
    """LHS minus RHS of the McMullen relation; zero up to rounding and quadrature error."""
    lhs, rhs = mcmullen_sides(P, k, r, s)
    return lhs - rhs


def expand_gen_tcm(P, k, r, s):
    """
    sum_{p=0}^{min(r, n-k)} ( Q Phi_{k+p}^{r-p, s+p-2}(P) - 2 pi (s+p) Phi_{k+p}^{r-p, s+p}(P) ),

    which equals k / (2 pi) * phi_k^{r,s-2,1}(P, R^n) for 1 <= k <= n - 1.
    """
    n = P.dim_ambient
    if not 1 <= k <= n - 1:
        raise ValueError(f"Need 1 <= k <= {n - 1}, got k={k}.")
    rank = max(r + s, 0)
    metric = SymTensor.metric(n)
    terms = []
    for p in range(min(r, n - k) + 1):
        if s + p - 2 >= 0:
            terms.append((1.0, sym_product(metric, phi(P, k + p, r - p, s + p - 2))))
        if s + p >= 0:
            terms.append((-2 * math.pi * (s + p), phi(P, k + p, r - p, s + p)))
    return combine(terms, dim=n, rank=rank)


def steiner_polynomial(P, epsilon):
    """Volume of the parallel body P + epsilon B^n: sum_j kappa_{n-j} V_j(P) epsilon^(n-j)."""
    if epsilon < 0:
        raise ValueError(f"The Steiner polynomial needs epsilon >= 0, got {epsilon}.")
    n = P.dim_ambient
    total = 0.0
    for j, volume in enumerate(intrinsic_volumes(P)):
        kappa = 1.0 if j == n else float(sphere_constants(n - j)[1])
        total += kappa * volume * epsilon ** (n - j)
    return total
