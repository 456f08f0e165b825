from django.conf import settings
from rest_framework import serializers

from mc_integration.serializers import EstimateSerializer
from polytope.loaders import PolytopeFileError
from polytope.serializers import PolytopeSerializer
from symtensor.serializers import SymTensorField

from .corpus import BodyError, body_dimension, parse_body_name, resolve_body

KINDS = ['kinematic', 'crofton', 'mcmullen', 'steiner', 'coefficients', 'tensor-algebra']
VERDICTS = ['PASS', 'FAIL']

MAX_POSITION_RANK = 4
MAX_NORMAL_RANK = 6


class BodyField(serializers.Field):
    """A body name, an inline ``{"dim", "vertices"}`` document or a ``{"file": path}`` reference."""
    default_error_messages = {
        'invalid': 'Expected a body name, an inline polytope or a file reference.',
        'unknown': '{message}',
    }

    def to_representation(self, value):
        return value

    def to_internal_value(self, data):
        if isinstance(data, str):
            try:
                parse_body_name(data)
            except BodyError as exc:
                self.fail('unknown', message=str(exc))
            return data
        if isinstance(data, dict) and set(data) == {'file'} and isinstance(data['file'], str):
            return {'file': data['file']}
        if isinstance(data, dict):
            serializer = PolytopeSerializer(data=data)
            if not serializer.is_valid():
                raise serializers.ValidationError(serializer.errors)
            return {'dim': serializer.validated_data['dim'], 'vertices': serializer.validated_data['vertices']}
        self.fail('invalid')


class ExperimentConfigSerializer(serializers.Serializer):
    """
    One experiment: a kind, the index lists to iterate, the bodies and the sampling parameters.

    Index lists default per kind in the runner; ``pairs`` lists kinematic body pairs, otherwise
    every body is paired with itself.
    """
    kind = serializers.ChoiceField(choices=KINDS)
    n = serializers.ChoiceField(choices=[2, 3], default=2)
    j = serializers.ListField(child=serializers.IntegerField(min_value=0, max_value=3), required=False)
    k = serializers.ListField(child=serializers.IntegerField(min_value=0, max_value=3), required=False)
    r = serializers.ListField(
        child=serializers.IntegerField(min_value=0, max_value=MAX_POSITION_RANK), required=False,
    )
    s = serializers.ListField(
        child=serializers.IntegerField(min_value=0, max_value=MAX_NORMAL_RANK), required=False,
    )
    max_order = serializers.IntegerField(min_value=0, max_value=MAX_NORMAL_RANK, default=3)
    bodies = serializers.ListField(child=BodyField(), min_length=1, required=False)
    pairs = serializers.ListField(
        child=serializers.ListField(child=BodyField(), min_length=2, max_length=2), min_length=1, required=False,
    )
    epsilon = serializers.ListField(child=serializers.FloatField(), min_length=1, default=[1.0])
    samples = serializers.IntegerField(min_value=1, default=10000)
    seed = serializers.IntegerField(min_value=0, default=0)
    workers = serializers.IntegerField(min_value=1, required=False)
    zmax = serializers.FloatField(min_value=0.0, required=False)
    atol = serializers.FloatField(min_value=0.0, required=False)
    rtol = serializers.FloatField(min_value=0.0, required=False)
    antithetic = serializers.BooleanField(default=False)

    def validate(self, attrs):
        n = attrs['n']
        for name in ('j', 'k'):
            for value in attrs.get(name, []):
                if value > n:
                    raise serializers.ValidationError({name: f"Index {value} exceeds the dimension {n}."})
        if any(eps <= 0 for eps in attrs['epsilon']):
            raise serializers.ValidationError({'epsilon': "Parallel distances must be positive."})
        specs = list(attrs.get('bodies', []))
        for pair in attrs.get('pairs', []):
            specs.extend(pair)
        for index, spec in enumerate(specs):
            self._check_body(spec, index, n, attrs['seed'])
        attrs.setdefault('zmax', getattr(settings, 'TENSORVAL_ZMAX', 3.0))
        attrs.setdefault('atol', getattr(settings, 'TENSORVAL_ATOL', 1e-10))
        return attrs

    def _check_body(self, spec, index, n, seed):
        declared = body_dimension(spec)
        if declared is None:
            try:
                declared = resolve_body(spec, index, seed)[1].dim_ambient
            except PolytopeFileError as exc:
                raise serializers.ValidationError({'bodies': str(exc)})
        if declared != n:
            raise serializers.ValidationError({'bodies': f"Body {spec!r} lives in R^{declared}, expected R^{n}."})


class CaseSerializer(serializers.Serializer):
    name = serializers.CharField()
    kind = serializers.ChoiceField(choices=KINDS)
    bodies = serializers.ListField(child=serializers.CharField())
    indices = serializers.DictField()
    exact = SymTensorField(allow_null=True)
    estimate = EstimateSerializer(allow_null=True)
    z = serializers.ListField(child=serializers.FloatField(allow_null=True), allow_null=True)
    max_abs_z = serializers.FloatField(allow_null=True)
    residual = serializers.FloatField(allow_null=True)
    checked = serializers.IntegerField(allow_null=True)
    failed = serializers.IntegerField(allow_null=True)
    failures = serializers.ListField(child=serializers.CharField())
    verdict = serializers.ChoiceField(choices=VERDICTS)
    wall_time = serializers.FloatField(required=False)


class SummarySerializer(serializers.Serializer):
    cases = serializers.IntegerField(min_value=0)
    passed = serializers.IntegerField(min_value=0)
    failed = serializers.IntegerField(min_value=0)
    max_abs_z = serializers.FloatField()
    verdict = serializers.ChoiceField(choices=VERDICTS)


class ReportSerializer(serializers.Serializer):
    config = serializers.DictField()
    cases = CaseSerializer(many=True)
    summary = SummarySerializer()


class SuiteReportSerializer(serializers.Serializer):
    preset = serializers.CharField()
    seed = serializers.IntegerField(allow_null=True)
    experiments = ReportSerializer(many=True)
    summary = SummarySerializer()
