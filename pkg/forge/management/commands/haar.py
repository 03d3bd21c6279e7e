from forge.runner import ExperimentCommand


class Command(ExperimentCommand):
    help = (
        "Signed cycle type distribution of the multiplier-gamma coset of Sp_2g(F_l). "
        "CSV columns: type,weight,weight_float."
    )
    subcommand = "haar"
    arguments = [
        ("--g", {"type": int}),
        ("--l", {"type": int, "help": "Odd prime"}),
        ("--gamma", {"type": int, "help": "Multiplier, nonzero mod l"}),
        ("--mode", {"choices": ["exact", "montecarlo"]}),
        ("--samples", {"type": int}),
        ("--walk-length", {"dest": "walk_length", "type": int}),
        (
            "--alternative-representative",
            {"dest": "alternative_representative", "action": "store_const", "const": True},
        ),
        ("--csv", {"help": "CSV path"}),
    ]
