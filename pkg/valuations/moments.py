"""
Position moments of faces: Upsilon_r(F) = 1/r! * integral over F of x^r.

Each face carries a triangulation; over a k-simplex with vertices v_0..v_k the moment has the
closed form

    1/r! * integral of x^r = k! vol / (k + r)! * h_r(v_0, ..., v_k),

where h_r is the complete homogeneous symmetric polynomial, i.e. the sum over exponent
patterns a with |a| = r of the symmetric products v_0^(a_0) ... v_k^(a_k).
"""
import math

from django.conf import settings

from polytope.polytopes import simplex_volume
from symtensor.tensors import SymTensor, combine, multi_indices, sym_product, tensor_power


def max_position_rank():
    return getattr(settings, 'TENSORVAL_MAX_POSITION_RANK', 4)


def complete_homogeneous(points, r):
    """h_r of the rows of ``points`` as a rank-r symmetric tensor."""
    dim = points.shape[1]
    powers = [[tensor_power(p, a) for a in range(r + 1)] for p in points]
    terms = []
    for exponents in multi_indices(len(points), r):
        terms.append((1.0, sym_product(*(powers[i][a] for i, a in enumerate(exponents)))))
    return combine(terms, dim=dim, rank=r)


def simplex_moment(simplex, r, volume):
    """1/r! * integral of x^r over a simplex of the given volume."""
    k = simplex.shape[0] - 1
    factor = math.factorial(k) * volume / math.factorial(k + r)
    return complete_homogeneous(simplex, r).scale(factor)


def upsilon(F, r):
    """
    Upsilon_r(F) as a rank-r tensor; zero (rank 0) for r < 0.

    Raises:
        ValueError: if r exceeds ``TENSORVAL_MAX_POSITION_RANK``.
    """
    dim = F.dim_ambient
    if r < 0:
        return SymTensor.zeros(dim, 0)
    cap = max_position_rank()
    if r > cap:
        raise ValueError(f"Position rank r={r} exceeds the configured cap {cap}.")
    terms = []
    for simplex in F.simplices:
        volume = simplex_volume(simplex)
        if volume > 0:
            terms.append((1.0, simplex_moment(simplex, r, volume)))
    return combine(terms, dim=dim, rank=r)


def face_upsilon(P, F, r):
    """Upsilon_r(F) memoized on P."""
    return P.cached(('upsilon', F.dim, F.index, r), lambda: upsilon(F, r))


def volume_moment(P, r):
    """Phi_n^{r,0}(P) = 1/r! * integral over P of x^r; zero unless P is full-dimensional."""
    n = P.dim_ambient
    if r < 0:
        return SymTensor.zeros(n, 0)
    if not P.is_full_dimensional:
        return SymTensor.zeros(n, r)
    return face_upsilon(P, P.top_face, r)
