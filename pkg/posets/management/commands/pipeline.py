"""
Run an embedding of I(R) into J(P) through the separating maps g and h and back.
"""
from posets.core import Semilattice
from posets.embeddings import embedding_round_trip
from posets.management.base import LabCommand
from posets.serializers import load_poset


class Command(LabCommand):
    help = "Round trip f -> g -> h -> f' for R (SRC) and a join-semilattice P (DST)"

    def add_command_arguments(self, parser):
        parser.add_argument("src", help="JSON poset file for R")
        parser.add_argument("dst", help="JSON poset file for P (join-semilattice with bottom)")
        parser.add_argument("--bound", type=int, default=None, help="Longest tuple checked")

    def run(self, config, options):
        self.check_counts(options, ("bound",), minimum=1)
        R = load_poset(options["src"], config)
        P = Semilattice.of(load_poset(options["dst"], config))
        report = embedding_round_trip(R, P, options.get("bound"), config)
        data = {**report.to_dict(), "seed": config.seed}
        self.emit(self.render(data, config), options)
        return report.found
