from forge.runner import ExperimentCommand


class Command(ExperimentCommand):
    help = "Run the hand-derived oracle checks"
    subcommand = "selftest"
