from django.contrib import admin
from . models import DecompositionRecord, StructureCache


@admin.register(StructureCache)
class StructureCacheAdmin(admin.ModelAdmin):
    list_display = ['digest', 'function', 'order', 'updated_at']
    list_filter = ['function']


@admin.register(DecompositionRecord)
class DecompositionRecordAdmin(admin.ModelAdmin):
    list_display = ['id', 'variant', 'function', 'order', 'root_index', 'created_at']
    list_filter = ['variant', 'function']
