"""
Search for an embedding between two poset files.
"""
from posets.embeddings import EmbeddingMode, find_embedding
from posets.management.base import LabCommand
from posets.serializers import load_poset


class Command(LabCommand):
    help = "Find the least embedding of SRC into DST (exit 1 when none exists)"

    def add_command_arguments(self, parser):
        parser.add_argument("src", help="JSON poset file to embed")
        parser.add_argument("dst", help="JSON poset file to embed into")
        parser.add_argument(
            "--mode", choices=[m.value for m in EmbeddingMode], default=EmbeddingMode.ORDER.value
        )

    def run(self, config, options):
        Q = load_poset(options["src"], config)
        P = load_poset(options["dst"], config)
        mode = EmbeddingMode(options["mode"])
        witness = find_embedding(Q, P, mode)
        if witness is None:
            report = {"mode": mode.value, "map": None, "verified": False}
        else:
            report = witness.to_dict()
        self.emit(self.render(report, config), options)
        return witness is not None
