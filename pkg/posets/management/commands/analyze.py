"""
Report structural invariants of a poset file.
"""
from posets.core import JoinTable, as_join_semilattice, height_width, linear_extensions
from posets.management.base import LabCommand
from posets.serializers import load_poset

EXTENSION_LIMIT = 10_000


class Command(LabCommand):
    help = "Height, width, join structure and linear extension count of a poset file"

    def add_command_arguments(self, parser):
        parser.add_argument("file", help="JSON poset file")

    def run(self, config, options):
        P = load_poset(options["file"], config)
        hw = height_width(P)
        joins = as_join_semilattice(P)
        extensions = linear_extensions(P, EXTENSION_LIMIT) if P.size else None
        report = {
            "size": P.size,
            "covers": len(P.covers()),
            "height": hw.height,
            "width": hw.width,
            "chain": list(hw.chain),
            "antichain": list(hw.antichain),
            "bottom": P.bottom,
            "top": P.top,
            "join_semilattice": isinstance(joins, JoinTable),
            "missing_join": None if isinstance(joins, JoinTable) else list(joins),
            "linear_extensions": extensions.total if extensions else 1,
            "seed": config.seed,
        }
        self.emit(self.render(report, config, P), options)
        return True
