from django.db import models
import uuid


class StructureCache(models.Model):
    """A serialized tangle data structure, one per instance, function and order."""
    digest = models.CharField(max_length=64)  # sha256 of the normalized instance text
    function = models.CharField(max_length=32)
    order = models.PositiveIntegerField()
    document = models.JSONField()

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        constraints = [
            models.UniqueConstraint(fields=['digest', 'function', 'order'], name='unique_structure_per_order'),
        ]

    def __str__(self):
        return f"{self.function} order {self.order} ({self.digest[:12]})"


class DecompositionRecord(models.Model):
    CANONICAL = 'canonical'
    REFINED = 'refined'
    DIRECTED = 'directed'
    VARIANTS = [
        (CANONICAL, 'Canonical'),
        (REFINED, 'Refined'),
        (DIRECTED, 'Directed'),
    ]

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    digest = models.CharField(max_length=64)
    function = models.CharField(max_length=32)
    order = models.PositiveIntegerField()
    variant = models.CharField(max_length=16, choices=VARIANTS, default=CANONICAL)
    root_index = models.PositiveIntegerField(null=True, blank=True)  # directed only
    document = models.JSONField()

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    def __str__(self):
        return f"{self.variant} {self.function} order {self.order}"
