"""
Run a probe over a truncation family and report the stage profile.
"""
from posets.exceptions import ConfigError
from posets.management.base import LabCommand
from posets.order_types import Fin, parse_order_type
from posets.probes import (
    FAMILIES,
    ObstructionSet,
    dichotomy_probe,
    direct_sum_split,
    make_family,
    monotonic_containment,
    obstruction_scan,
    product_decomposition,
    width_growth,
)
from posets.serializers import load_poset

PROBES = ("width", "obstruction", "dichotomy", "containment", "split", "product")

# structural probes run on one family each
PROBE_FAMILY = {"containment": "mono-sierp", "split": "sierp", "product": "Q-alpha"}


class Command(LabCommand):
    help = "Probe a truncation family: width, obstruction, dichotomy, containment, split, product"

    def add_command_arguments(self, parser):
        parser.add_argument("family", choices=FAMILIES)
        parser.add_argument("probe", choices=PROBES)
        parser.add_argument("--budget", type=int, default=None, help="Stage budget")
        parser.add_argument("--alpha", default=None, help="Order type of the family")
        parser.add_argument("--phi", default=None, help="phi strategy for sierpinskisations")
        parser.add_argument("--target", default=None, help="Poset file scanned by 'obstruction'")
        parser.add_argument("--stage", type=int, default=None, help="Stage for structural probes")
        parser.add_argument("--samples", type=int, default=100, help="Samples for 'containment'")
        parser.add_argument("--m", type=int, default=4, help="Core size for 'containment'")

    def run(self, config, options):
        self.check_counts(options, ("budget", "stage"))
        self.check_counts(options, ("samples", "m"), minimum=1)
        family, probe = options["family"], options["probe"]
        expected = PROBE_FAMILY.get(probe)
        if expected is not None and family != expected:
            raise ConfigError(f"Probe '{probe}' runs on the '{expected}' family, got '{family}'")
        budget = options.get("budget")

        match probe:
            case "width":
                F = self._family(config, options)
                report = width_growth(F, budget or config.family_budget, config)
                negative = False
            case "obstruction":
                if not options.get("target"):
                    raise ConfigError("Probe 'obstruction' needs --target")
                P = load_poset(options["target"], config)
                report = obstruction_scan(
                    P, ObstructionSet((self._family(config, options),)), budget, config
                )
                negative = report.scans[0].stage_max is None
            case "dichotomy":
                report = dichotomy_probe(self._family(config, options), budget, config)
                negative = False
            case "containment":
                alpha = options.get("alpha")
                report = monotonic_containment(
                    parse_order_type(alpha) if alpha else Fin(2),
                    options.get("stage") or 8,
                    options["m"],
                    options["samples"],
                    config.seed,
                    config,
                    phi=options.get("phi") or "random",
                )
                negative = bool(report.failures)
            case "split":
                report = direct_sum_split(self._alpha(options), options.get("stage") or 6, config)
                negative = not report.found
            case "product":
                report = product_decomposition(
                    self._alpha(options), options.get("stage") or 4, config
                )
                negative = report.isomorphism is None

        self.emit(self.render(report.to_dict(), config), options)
        return not negative

    def _alpha(self, options):
        if not options.get("alpha"):
            raise ConfigError(f"Probe '{options['probe']}' needs --alpha")
        return parse_order_type(options["alpha"])

    def _family(self, config, options):
        return make_family(
            options["family"],
            config,
            alpha=options.get("alpha"),
            phi=options.get("phi"),
            seed=config.seed,
        )
