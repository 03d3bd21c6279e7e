from forge.runner import ExperimentCommand


class Command(ExperimentCommand):
    help = "Scan the family over F_{q^n} under local conditions and emit one JSON record per kept t"
    subcommand = "forge"
    savable = True
    arguments = [
        ("--q", {"type": int}),
        ("--n", {"type": int}),
        ("--g", {"type": int}),
        (
            "--constraint",
            {
                "dest": "constraints",
                "action": "append",
                "help": "kind@l, e.g. split_completely@3, repeated_root@2, inert_pair@7, type_equals@7:1+,1-",
            },
        ),
        ("--certify", {"action": "store_const", "const": True}),
        ("--census-bound", {"dest": "census_bound", "type": int}),
        ("--prime-budget", {"dest": "prime_budget", "type": int}),
        ("--stride", {"type": int, "help": "Scan every stride-th t"}),
    ]
