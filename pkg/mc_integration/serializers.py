from rest_framework import serializers

from symtensor.serializers import SymTensorField

from .estimators import Estimate


class EstimateSerializer(serializers.Serializer):
    mean = SymTensorField()
    stderr = SymTensorField()
    samples = serializers.IntegerField(min_value=1)
    seed = serializers.IntegerField(min_value=0)
    windowVolume = serializers.FloatField(source='window_volume', min_value=0.0)

    def validate(self, data):
        mean, stderr = data['mean'], data['stderr']
        if (mean.dim, mean.rank) != (stderr.dim, stderr.rank):
            raise serializers.ValidationError("Mean and standard error must have the same shape.")
        return data

    def create(self, validated_data):
        return Estimate(**validated_data)

