# Generated by Django 4.0.6

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="StoredWeightTable",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True, primary_key=True, serialize=False, verbose_name="ID"
                    ),
                ),
                ("n", models.PositiveSmallIntegerField(help_text="Highest order covered by the table")),
                ("m", models.PositiveSmallIntegerField(default=2)),
                (
                    "method",
                    models.CharField(
                        choices=[
                            ("counted", "Counted preimages"),
                            ("semicircle", "Semicircle rule"),
                            ("mc", "Monte-Carlo"),
                        ],
                        max_length=12,
                    ),
                ),
                ("angle_map", models.CharField(max_length=24)),
                ("form", models.JSONField(blank=True, null=True)),
                ("seed", models.BigIntegerField(blank=True, null=True)),
                ("payload", models.JSONField()),
                ("created", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ("-created",),
            },
        ),
    ]
