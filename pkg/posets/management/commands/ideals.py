"""
Write the downset, ideal or finitely generated downset lattice of a poset file.
"""
from posets.ideals import all_downsets, fin_gen_downsets, ideals_of
from posets.management.base import LabCommand
from posets.render import to_dot
from posets.serializers import load_poset, poset_to_dict

KINDS = {
    "all": all_downsets,
    "ideals": ideals_of,
    "fingen": fin_gen_downsets,
}


class Command(LabCommand):
    help = "Build I(P), J(P) or the finitely generated downsets of a poset file"

    def add_command_arguments(self, parser):
        parser.add_argument("file", help="JSON poset file")
        parser.add_argument("--kind", choices=sorted(KINDS), default="all")
        parser.add_argument("--dot", default=None, help="Also write a DOT Hasse diagram here")

    def run(self, config, options):
        P = load_poset(options["file"], config)
        lattice = KINDS[options["kind"]](P, config=config)
        L = lattice.poset
        if options.get("dot"):
            self.write_file(options["dot"], to_dot(L))
        self.emit(self.render(poset_to_dict(L), config, L), options)
        return True
