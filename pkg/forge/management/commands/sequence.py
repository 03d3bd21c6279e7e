from forge.runner import ExperimentCommand, int_list


class Command(ExperimentCommand):
    help = "Select one certified field per n with forced ramification and auxiliary split primes"
    subcommand = "sequence"
    savable = True
    arguments = [
        ("--q", {"type": int}),
        ("--g", {"type": int}),
        ("--n-list", {"dest": "n_list", "type": int_list}),
        ("--preset", {"choices": ["asymptotic", "desk"], "help": "Defaults to asymptotic"}),
        ("--ramify-exponent", {"dest": "ramify_exponent", "help": "Rational, e.g. 1/32"}),
        ("--c-g", {"dest": "c_g", "type": float}),
        ("--c1", {"help": "Rational constant of the discriminant lower bound"}),
        ("--c2", {"help": "Rational constant of the discriminant upper bound"}),
        ("--census-cap", {"dest": "census_cap", "type": int}),
        ("--prime-budget", {"dest": "prime_budget", "type": int}),
    ]
