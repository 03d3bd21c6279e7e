from forge.runner import ExperimentCommand, int_list


class Command(ExperimentCommand):
    help = (
        "Classify every prime up to a bound by its signed cycle type. "
        "CSV columns: p,type (--csv) and X,N_K(X),X/(d log X) (--curve-csv)."
    )
    subcommand = "census"
    arguments = [
        ("--h", {"type": int_list, "help": "Little-endian coefficients of h"}),
        ("--bound", {"type": int, "help": "Census bound X"}),
        ("--checkpoints", {"type": int_list, "help": "X values of the counting curve"}),
        ("--csv", {"help": "Per-prime CSV path"}),
        ("--curve-csv", {"dest": "curve_csv", "help": "Counting curve CSV path"}),
    ]
