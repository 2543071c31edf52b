from . models import *
from rest_framework import serializers


class DecompositionRecordSerializer(serializers.ModelSerializer):

    class Meta:
        model = DecompositionRecord
        fields = ['id', 'digest', 'function', 'order', 'variant', 'root_index', 'document',
                  'created_at', 'updated_at']