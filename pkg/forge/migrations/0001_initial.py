# Generated by Django 6.0 on 2026-10-18 05:40

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('subcommand', models.CharField(max_length=20)),
                ('config_text', models.TextField()),
                ('version', models.CharField(max_length=20)),
                ('master_seed', models.CharField(max_length=20)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='CandidateRow',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('n', models.IntegerField()),
                ('t', models.CharField(max_length=200)),
                ('t_index', models.BigIntegerField()),
                ('h', models.JSONField()),
                ('discriminant', models.TextField()),
                ('status', models.CharField(blank=True, choices=[('', 'Not certified'), ('Certified', 'Certified'), ('Refuted', 'Refuted'), ('Inconclusive', 'Inconclusive')], max_length=20)),
                ('split_count', models.IntegerField(blank=True, null=True)),
                ('record', models.JSONField()),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='candidates', to='forge.experimentrun')),
            ],
            options={
                'ordering': ['run', 'n', 't_index'],
            },
        ),
    ]
