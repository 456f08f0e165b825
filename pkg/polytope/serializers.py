from rest_framework import serializers

from .polytopes import build_polytope


class PolytopeSerializer(serializers.Serializer):
    """
    Polytope input document ``{"dim": n, "vertices": [[...], ...]}``.
    Validated data builds a Polytope; an existing Polytope renders back to the same shape.
    """
    dim = serializers.ChoiceField(choices=[2, 3])
    vertices = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=3),
        min_length=1,
    )

    def validate(self, attrs):
        dim = attrs['dim']
        for i, vertex in enumerate(attrs['vertices']):
            if len(vertex) != dim:
                raise serializers.ValidationError(
                    {'vertices': f"Vertex {i} has {len(vertex)} coordinates, expected {dim}."}
                )
        return attrs

    def create(self, validated_data):
        return build_polytope(validated_data['vertices'])

    def to_representation(self, instance):
        return instance.to_dict()
