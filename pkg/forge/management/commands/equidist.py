from forge.runner import ExperimentCommand, int_list


class Command(ExperimentCommand):
    help = (
        "Compare family Frobenius types at l with the group coset of multiplier q^n mod l for each n. "
        "CSV columns: n,gamma,tv,tv_regular,family_split_mass,error_constant."
    )
    subcommand = "equidist"
    arguments = [
        ("--q", {"type": int}),
        ("--g", {"type": int}),
        ("--l", {"type": int}),
        ("--n-list", {"dest": "n_list", "type": int_list, "help": "Ascending, e.g. 1,2,3,4"}),
        ("--mode", {"choices": ["exact", "montecarlo"]}),
        ("--samples", {"type": int}),
        ("--csv", {"help": "CSV path"}),
    ]
