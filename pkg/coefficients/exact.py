"""
Exact scalars of the form q * pi^(h/2) with q rational and h an integer.

Every Gamma value at a half-integer, every sphere constant and every coefficient of the
kinematic and Crofton formulae is such a monomial. Sums of monomials with different pi
exponents are kept as a normal-form sum so that identities can be checked exactly.
"""
import math
from fractions import Fraction
from functools import lru_cache

_NUMBER_TYPES = (int, Fraction)


class ExactScalar:
    """Immutable sum of terms q_h * pi^(h/2), stored as ``{h: q_h}`` with zero terms dropped."""

    __slots__ = ('_terms',)

    def __init__(self, q=0, pi_half_pow=0):
        q = Fraction(q)
        object.__setattr__(self, '_terms', {int(pi_half_pow): q} if q else {})

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable.")

    @classmethod
    def from_terms(cls, terms):
        """Build from ``{pi_half_pow: rational}``; equal exponents are merged."""
        result = cls()
        merged = {}
        for h, q in dict(terms).items():
            q = Fraction(q)
            if q:
                merged[int(h)] = merged.get(int(h), Fraction(0)) + q
        object.__setattr__(result, '_terms', {h: q for h, q in merged.items() if q})
        return result

    @classmethod
    def pi(cls, half_pow=2):
        """pi^(half_pow/2); ``ExactScalar.pi()`` is pi itself."""
        return cls(1, half_pow)

    @staticmethod
    def coerce(value):
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, _NUMBER_TYPES):
            return ExactScalar(value)
        raise TypeError(f"Cannot use {type(value).__name__} as an exact scalar.")

    # Accessors

    @property
    def terms(self):
        return dict(sorted(self._terms.items()))

    @property
    def is_zero(self):
        return not self._terms

    @property
    def is_monomial(self):
        return len(self._terms) <= 1

    def _monomial(self):
        if not self.is_monomial:
            raise ValueError(f"{self!r} is a sum of {len(self._terms)} pi powers, not a monomial.")
        if not self._terms:
            return 0, Fraction(0)
        (h, q), = self._terms.items()
        return h, q

    @property
    def q(self):
        return self._monomial()[1]

    @property
    def pi_half_pow(self):
        return self._monomial()[0]

    # Arithmetic

    def __add__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for h, q in other._terms.items():
            terms[h] = terms.get(h, Fraction(0)) + q
        return ExactScalar.from_terms(terms)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar.from_terms({h: -q for h, q in self._terms.items()})

    def __sub__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ExactScalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        terms = {}
        for ha, qa in self._terms.items():
            for hb, qb in other._terms.items():
                terms[ha + hb] = terms.get(ha + hb, Fraction(0)) + qa * qb
        return ExactScalar.from_terms(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("Division by an exact zero.")
        h, q = other._monomial()
        return ExactScalar.from_terms({ha - h: qa / q for ha, qa in self._terms.items()})

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ExactScalar(1) / (self ** -exponent)
        result = ExactScalar(1)
        for _ in range(exponent):
            result = result * self
        return result

    # Comparison and conversion

    def __eq__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(sorted(self._terms.items())))

    def __float__(self):
        return float(sum(float(q) * math.pi ** (h / 2) for h, q in self._terms.items()))

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        if self.is_zero:
            return 'ExactScalar(0)'
        parts = [f"{q}*pi^({h}/2)" if h else f"{q}" for h, q in sorted(self._terms.items())]
        return f"ExactScalar({' + '.join(parts)})"

    def to_dict(self):
        """Report form ``{"num", "den", "piHalfPow", "value"}``; sums list their terms."""
        if self.is_monomial:
            h, q = self._monomial()
            return {
                'num': str(q.numerator),
                'den': str(q.denominator),
                'piHalfPow': h,
                'value': float(self),
            }
        return {
            'terms': [ExactScalar(q, h).to_dict() for h, q in sorted(self._terms.items())],
            'value': float(self),
        }

    @classmethod
    def from_dict(cls, data):
        if 'terms' in data:
            result = cls()
            for term in data['terms']:
                result = result + cls.from_dict(term)
            return result
        return cls(Fraction(int(data['num']), int(data['den'])), int(data['piHalfPow']))


def _is_pole(two_arg):
    return two_arg <= 0 and two_arg % 2 == 0


@lru_cache(maxsize=None)
def _gamma_half_any(two_arg):
    """Gamma(two_arg/2) for any argument that is not a pole."""
    if _is_pole(two_arg):
        raise ValueError(f"Gamma has a pole at {two_arg}/2.")
    if two_arg % 2 == 0:
        return ExactScalar(math.factorial(two_arg // 2 - 1))
    k = (two_arg - 1) // 2
    if k >= 0:
        # Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
        return ExactScalar(Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k)), 1)
    k = -k
    # Gamma(1/2 - k) = (-4)^k k! / (2k)! sqrt(pi)
    return ExactScalar(Fraction((-4) ** k * math.factorial(k), math.factorial(2 * k)), 1)


def gamma_half(two_arg):
    """Exact Gamma(two_arg / 2) for a positive integer ``two_arg``."""
    if not isinstance(two_arg, int) or two_arg < 1:
        raise ValueError(f"gamma_half needs a positive integer, got {two_arg!r}; use rgamma_ratio near poles.")
    return _gamma_half_any(two_arg)


@lru_cache(maxsize=None)
def rgamma_ratio(num_two_arg, den_two_arg):
    """
    Gamma(num/2) / Gamma(den/2) with the pole conventions of the coefficient formulas.

    - a pole only in the denominator gives 0, so 1/Gamma(0) = 1/(-1)! = 0;
    - poles in both places give the limit (-1)^(a-b) b!/a! of Gamma(-a)/Gamma(-b), which is 1
      when the arguments coincide (the Gamma functions cancel);
    - a pole only in the numerator has no finite reading and raises ValueError.
    """
    num_pole, den_pole = _is_pole(num_two_arg), _is_pole(den_two_arg)
    if num_pole and den_pole:
        a, b = -num_two_arg // 2, -den_two_arg // 2
        return ExactScalar(Fraction((-1) ** (a - b) * math.factorial(b), math.factorial(a)))
    if den_pole:
        return ExactScalar(0)
    if num_pole:
        raise ValueError(f"Gamma({num_two_arg}/2) / Gamma({den_two_arg}/2) diverges.")
    return _gamma_half_any(num_two_arg) / _gamma_half_any(den_two_arg)


@lru_cache(maxsize=None)
def sphere_constants(n):
    """(omega_n, kappa_n): surface area of S^(n-1) and volume of the unit ball in R^n."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"Sphere constants need a positive dimension, got {n!r}.")
    omega = ExactScalar(2, n) / gamma_half(n)
    return omega, omega / n
