from forge.runner import ExperimentCommand, index_or_coefficients


class Command(ExperimentCommand):
    help = "Count points on one member of the family and print its Frobenius characteristic polynomial h"
    subcommand = "zeta"
    arguments = [
        ("--g", {"type": int, "help": "Genus"}),
        ("--q", {"type": int, "help": "Odd prime > 2g"}),
        ("--n", {"type": int, "help": "Base field F_{q^n}"}),
        ("--t", {"type": index_or_coefficients, "help": "Parameter as an index or little-endian coefficients"}),
    ]
