from django.db import models

from .engine import COUNTED, MONTE_CARLO, SEMICIRCLE, WeightTable


# Create your models here.
class ExactTableManager(models.Manager):
    def get_queryset(self):
        return super().get_queryset().exclude(method=MONTE_CARLO)


class StoredWeightTable(models.Model):

    METHOD_CHOICES = [
        (COUNTED, "Counted preimages"),
        (SEMICIRCLE, "Semicircle rule"),
        (MONTE_CARLO, "Monte-Carlo"),
    ]
    n = models.PositiveSmallIntegerField(help_text="Highest order covered by the table")
    m = models.PositiveSmallIntegerField(default=2)
    method = models.CharField(max_length=12, choices=METHOD_CHOICES)
    angle_map = models.CharField(max_length=24)
    form = models.JSONField(null=True, blank=True)
    seed = models.BigIntegerField(null=True, blank=True)
    payload = models.JSONField()
    created = models.DateTimeField(auto_now_add=True)

    # Managers
    objects = models.Manager()
    exact = ExactTableManager()

    class Meta:
        ordering = ("-created",)

    def __str__(self):
        return f"{self.get_method_display()} weights through order {self.n}"

    @classmethod
    def from_table(cls, table: WeightTable) -> "StoredWeightTable":
        return cls(
            n=table.order,
            m=table.m,
            method=table.method,
            angle_map=table.angle_map.value,
            form=table.form.to_json() if table.form else None,
            seed=table.seed,
            payload=table.to_json(),
        )

    def get_table(self) -> WeightTable:
        return WeightTable.from_json(self.payload)
