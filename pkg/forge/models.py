from django.db import models

from forge import __version__

# =============================================================================
# Experiment Index Models
# =============================================================================


class ExperimentRun(models.Model):
    """One saved invocation of a subcommand with its canonical configuration"""

    subcommand = models.CharField(max_length=20)
    config_text = models.TextField()  # canonical JSON, byte-identical to the config file
    version = models.CharField(max_length=20)
    master_seed = models.CharField(max_length=20)  # unsigned 64-bit does not fit a BigIntegerField
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]

    def __str__(self):
        return f"{self.subcommand} run {self.pk}"


class CandidateRow(models.Model):
    """A family member selected or kept by a run"""

    STATUS_CHOICES = [
        ("", "Not certified"),
        ("Certified", "Certified"),
        ("Refuted", "Refuted"),
        ("Inconclusive", "Inconclusive"),
    ]

    run = models.ForeignKey(ExperimentRun, on_delete=models.CASCADE, related_name="candidates")
    n = models.IntegerField()
    t = models.CharField(max_length=200)  # serialized field element
    t_index = models.BigIntegerField()
    h = models.JSONField()
    discriminant = models.TextField()  # decimal string, exceeds 64 bits for g >= 3
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, blank=True)
    split_count = models.IntegerField(null=True, blank=True)
    record = models.JSONField()

    class Meta:
        ordering = ["run", "n", "t_index"]

    def __str__(self):
        return f"n={self.n} t={self.t} ({self.status or 'uncertified'})"


# =============================================================================
# Helper Functions
# =============================================================================


def save_run(subcommand: str, config, result) -> ExperimentRun:
    """Store a finished run and the candidate records it produced"""
    run = ExperimentRun.objects.create(
        subcommand=subcommand,
        config_text=config.to_json(),
        version=__version__,
        master_seed=str(config.seed),
    )
    CandidateRow.objects.bulk_create(
        [
            CandidateRow(
                run=run,
                n=n,
                t=record.t,
                t_index=record.t_index,
                h=[str(c) for c in record.h],
                discriminant=str(record.D),
                status=record.certificate.status if record.certificate else "",
                split_count=record.census.split_completely if record.census else None,
                record=record.to_dict(),
            )
            for n, record in result.records
        ]
    )
    return run
