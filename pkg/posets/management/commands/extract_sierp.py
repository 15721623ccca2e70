"""
Extract a sierpinskisation from a chain of ideals of a join-semilattice.
"""
import json

from posets.core import Semilattice, mask_of
from posets.embeddings import extract_sierp
from posets.exceptions import ConfigError
from posets.ideals import ideals_of, maximal_chains
from posets.management.base import LabCommand
from posets.serializers import load_poset, poset_to_dict


class Command(LabCommand):
    help = "Build the extracted poset S from a strictly increasing chain of ideals"

    def add_command_arguments(self, parser):
        parser.add_argument("file", help="JSON poset file (join-semilattice with bottom)")
        parser.add_argument(
            "--chain",
            default=None,
            help="JSON list of ideals, each a list of elements; "
            "defaults to the first maximal chain of ideals",
        )

    def run(self, config, options):
        S = Semilattice.of(load_poset(options["file"], config))
        if options.get("chain"):
            try:
                members = json.loads(options["chain"])
            except json.JSONDecodeError as e:
                raise ConfigError(f"--chain is not valid JSON: {e.msg}") from e
            if not isinstance(members, list) or not all(
                isinstance(member, list)
                and all(type(x) is int and 0 <= x < S.size for x in member)
                for member in members
            ):
                raise ConfigError(f"--chain must be a list of lists of elements in 0..{S.size - 1}")
            chain = [mask_of(member) for member in members]
        else:
            ideals = ideals_of(S.poset, config)
            first = maximal_chains(ideals, 1).chains[0]
            chain = [ideals.downsets[i] for i in first]
        report = extract_sierp(S, chain)
        data = {**report.to_dict(), "poset": poset_to_dict(report.S), "seed": config.seed}
        self.emit(self.render(data, config, report.S), options)
        return True
