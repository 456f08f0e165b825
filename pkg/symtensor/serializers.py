from rest_framework import serializers

from .tensors import SymTensor


class SymTensorField(serializers.Field):
    """
    A SymTensor as ``{"dim", "rank", "coefficients": [[exponents, value], ...]}``.
    """
    default_error_messages = {
        'invalid': 'Expected an object with dim, rank and coefficients.',
        'shape': 'Coefficients do not fit a rank-{rank} tensor over R^{dim}.',
    }

    def to_representation(self, value):
        return {'dim': value.dim, 'rank': value.rank, 'coefficients': value.to_list()}

    def to_internal_value(self, data):
        if not isinstance(data, dict) or not {'dim', 'rank', 'coefficients'} <= set(data):
            self.fail('invalid')
        try:
            return SymTensor.from_list(int(data['dim']), int(data['rank']), data['coefficients'])
        except (TypeError, ValueError):
            self.fail('shape', dim=data['dim'], rank=data['rank'])
