from forge.runner import ExperimentCommand, int_list


class Command(ExperimentCommand):
    help = "Certify that Q(pi) is a Weyl CM field for a Weil polynomial h"
    subcommand = "certify"
    arguments = [
        ("--h", {"type": int_list, "help": "Little-endian coefficients, e.g. 5,2,1 for T^2 + 2T + 5"}),
        ("--q", {"type": int}),
        ("--n", {"type": int}),
        ("--prime-budget", {"dest": "prime_budget", "type": int, "help": "Primes examined"}),
        (
            "--no-oracle",
            {"dest": "use_oracle", "action": "store_const", "const": False, "help": "Skip the quartic oracle"},
        ),
    ]
