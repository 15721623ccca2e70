"""
Exact order dimension of a small poset file.
"""
from posets.management.base import LabCommand
from posets.probes import dimension_exact, order_dimension
from posets.serializers import load_poset


class Command(LabCommand):
    help = "Least number of linear extensions realizing the order (exit 1 if above --kmax)"

    def add_command_arguments(self, parser):
        parser.add_argument("file", help="JSON poset file")
        parser.add_argument("--kmax", type=int, default=None, help="Largest k tried")

    def run(self, config, options):
        self.check_counts(options, ("kmax",), minimum=1)
        P = load_poset(options["file"], config)
        kmax = options.get("kmax") or config.dimension_budget
        k = dimension_exact(P, kmax, config)
        realizer = order_dimension(P, k) if k else None
        report = {
            "dimension": k,
            "kmax": kmax,
            "realizer": [list(e) for e in realizer.extensions] if realizer else None,
            "seed": config.seed,
        }
        self.emit(self.render(report, config), options)
        return k is not None
