# Generated by Django 5.1.1 on 2026-10-18 09:12

import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='DecompositionRecord',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('digest', models.CharField(max_length=64)),
                ('function', models.CharField(max_length=32)),
                ('order', models.PositiveIntegerField()),
                ('variant', models.CharField(choices=[('canonical', 'Canonical'), ('refined', 'Refined'), ('directed', 'Directed')], default='canonical', max_length=16)),
                ('root_index', models.PositiveIntegerField(blank=True, null=True)),
                ('document', models.JSONField()),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
        ),
        migrations.CreateModel(
            name='StructureCache',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('digest', models.CharField(max_length=64)),
                ('function', models.CharField(max_length=32)),
                ('order', models.PositiveIntegerField()),
                ('document', models.JSONField()),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'constraints': [models.UniqueConstraint(fields=('digest', 'function', 'order'), name='unique_structure_per_order')],
            },
        ),
    ]
