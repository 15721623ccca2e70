"""
File formats: JSON posets and config overlays, validated with DRF serializers.

A poset file is ``{"size": n, "covers": [[lower, upper], ...], "labels": [...]}``;
``covers`` may be any generating relation, it is closed on load.
"""
import json
import logging
from pathlib import Path

from rest_framework import serializers

from .config import OUTPUT_FORMATS, LabConfig, get_config
from .core import Poset, from_covers
from .exceptions import PosetFormatError, SizeLimit

logger = logging.getLogger(__name__)


class PosetSerializer(serializers.Serializer):
    size = serializers.IntegerField(min_value=0)
    covers = serializers.ListField(
        child=serializers.ListField(
            child=serializers.IntegerField(min_value=0), min_length=2, max_length=2
        ),
        allow_empty=True,
    )
    labels = serializers.ListField(
        child=serializers.CharField(allow_blank=True), required=False, allow_null=True
    )

    def validate(self, attrs):
        size = attrs["size"]
        for x, y in attrs["covers"]:
            if x >= size or y >= size:
                raise serializers.ValidationError(
                    f"Pair [{x}, {y}] references an element outside 0..{size - 1}"
                )
        labels = attrs.get("labels")
        if labels is not None and len(labels) != size:
            raise serializers.ValidationError(f"Expected {size} labels, got {len(labels)}")
        return attrs

    def to_poset(self) -> Poset:
        data = self.validated_data
        return from_covers(data["size"], [tuple(c) for c in data["covers"]], data.get("labels"))


def poset_to_dict(P: Poset) -> dict:
    data = {"size": P.size, "covers": [list(c) for c in P.covers()]}
    if P.labels is not None:
        data["labels"] = list(P.labels)
    return data


def parse_poset(text: str, source: str = "<input>", config: LabConfig | None = None) -> Poset:
    """Parse a JSON poset document.

    Raises:
        PosetFormatError: invalid JSON (with its line) or an invalid document.
        SizeLimit: more elements than ``config.max_elements``.
    """
    config = get_config(config)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise PosetFormatError(f"{source}: {e.msg}", line=e.lineno) from e

    serializer = PosetSerializer(data=data)
    if not serializer.is_valid():
        logger.warning(f"Rejected poset file {source}: {serializer.errors}")
        raise PosetFormatError(f"{source}: {json.dumps(serializer.errors, sort_keys=True)}")
    size = serializer.validated_data["size"]
    if size > config.max_elements:
        raise SizeLimit("poset file", size, config.max_elements)
    return serializer.to_poset()


def load_poset(path: str | Path, config: LabConfig | None = None) -> Poset:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise PosetFormatError(f"Cannot read {path}: {e.strerror}") from e
    return parse_poset(text, str(path), config)


class ConfigSerializer(serializers.Serializer):
    """Overlay for LabConfig; every key is optional."""

    max_elements = serializers.IntegerField(min_value=1, required=False)
    max_downsets = serializers.IntegerField(min_value=1, required=False)
    tuple_bound = serializers.IntegerField(min_value=1, required=False)
    seed = serializers.IntegerField(min_value=0, max_value=2**64 - 1, required=False)
    output_format = serializers.ChoiceField(choices=OUTPUT_FORMATS, required=False)
    max_powerset_k = serializers.IntegerField(min_value=1, required=False)
    obstruction_budget = serializers.IntegerField(min_value=1, required=False)
    family_budget = serializers.IntegerField(min_value=1, required=False)
    dimension_budget = serializers.IntegerField(min_value=1, required=False)
    max_dimension_elements = serializers.IntegerField(min_value=1, required=False)
    workers = serializers.IntegerField(min_value=1, required=False)

    def validate(self, attrs):
        unknown = set(self.initial_data) - set(self.fields)
        if unknown:
            raise serializers.ValidationError(f"Unknown keys: {', '.join(sorted(unknown))}")
        return attrs
