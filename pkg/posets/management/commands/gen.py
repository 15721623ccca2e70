"""
Generate a named poset and write it as a JSON poset file.
"""
from pathlib import Path

from posets.constructions import GENERATORS, generate
from posets.management.base import LabCommand
from posets.render import to_dot
from posets.serializers import poset_to_dict


class Command(LabCommand):
    help = "Generate a named poset (sierpinskisations, figures, powersets, S/P/Q alpha)"

    def add_command_arguments(self, parser):
        parser.add_argument("name", help=f"Generator: {', '.join(GENERATORS)}")
        parser.add_argument("--n", type=int, default=None, help="Size parameter")
        parser.add_argument("--k", type=int, default=None, help="Powerset ground set size")
        parser.add_argument("--alpha", default=None, help="Order type, e.g. 'w.(2)+1' or 'eta'")
        parser.add_argument("--stage", type=int, default=None, help="Truncation stage")
        parser.add_argument("--phi", default=None, help="phi strategy or a comma permutation")
        parser.add_argument(
            "--dot",
            nargs="?",
            const="",
            default=None,
            help="Also write a DOT Hasse diagram (next to --output, or instead of JSON on stdout)",
        )

    def run(self, config, options):
        self.check_counts(options, ("n", "k", "stage"))
        P = generate(
            options["name"],
            config,
            n=options["n"],
            k=options["k"],
            alpha=options["alpha"],
            stage=options["stage"],
            phi=options["phi"],
            seed=config.seed,
        )
        dot = options.get("dot")
        if dot is None:
            self.emit(self.render(poset_to_dict(P), config, P), options)
            return True
        if dot:
            self.write_file(dot, to_dot(P))
        elif options.get("output"):
            self.write_file(Path(options["output"]).with_suffix(".dot"), to_dot(P))
        else:
            self.emit(to_dot(P), options)
            return True
        self.emit(self.render(poset_to_dict(P), config, P), options)
        return True
