"""Subfigure marker detection, region merging, and caption alignment.

Input is a pre-detected layout (image regions plus recognized text boxes in
figure pixel coordinates) and the figure caption. The pipeline identifies
single-letter marker boxes, assigns every region to its nearest marker by
edge-to-edge distance, merges each marker's regions under one hull, splits
the caption into lettered fragments, and aligns fragments to panels. Labels
whose text exactly matches a known entity alias become grounding triples.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .corpus import GroundingTriple
from .errors import SchemaError

# (X) is unambiguous anywhere in a caption; X) and X. only open a fragment.
_MARKER_BOX_RE = re.compile(r"^(?:\(([A-Za-z])\)|([A-Za-z])\)|([A-Za-z])\.|([A-Za-z]))$")
_CAPTION_PAREN_RE = re.compile(r"\(([A-Za-z])\)")
_CAPTION_OPEN_RE = re.compile(r"\(([A-Za-z])\)|([A-Za-z])\)|([A-Za-z])\.")
_FRAGMENT_START_RE = re.compile(r"[.;]\s+")

PREAMBLE_KEY = "*"


@dataclass(frozen=True)
class Box:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise SchemaError(f"degenerate box {(self.x0, self.y0, self.x1, self.y1)}")

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def intersects(self, other: "Box") -> bool:
        return not (
            self.x1 <= other.x0
            or other.x1 <= self.x0
            or self.y1 <= other.y0
            or other.y1 <= self.y0
        )

    def edge_distance(self, other: "Box") -> float:
        """Euclidean gap between box edges; 0 when the boxes touch or overlap."""
        dx = max(self.x0 - other.x1, other.x0 - self.x1, 0.0)
        dy = max(self.y0 - other.y1, other.y0 - self.y1, 0.0)
        return math.hypot(dx, dy)

    def to_list(self) -> list[float]:
        return [self.x0, self.y0, self.x1, self.y1]


def hull(boxes: Iterable[Box]) -> Box:
    boxes = list(boxes)
    return Box(
        x0=min(b.x0 for b in boxes),
        y0=min(b.y0 for b in boxes),
        x1=max(b.x1 for b in boxes),
        y1=max(b.y1 for b in boxes),
    )


@dataclass(frozen=True)
class TextBox:
    box: Box
    text: str


@dataclass(frozen=True)
class Marker:
    letter: str
    box: TextBox


@dataclass
class SubfigureRecord:
    marker: Optional[str]
    bbox: Box
    regions: list[Box]
    labels: list[TextBox] = field(default_factory=list)
    subcaption: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "marker": self.marker,
            "bbox": self.bbox.to_list(),
            "regions": [r.to_list() for r in self.regions],
            "labels": [{"box": l.box.to_list(), "text": l.text} for l in self.labels],
            "subcaption": self.subcaption,
        }


def detect_markers(text_boxes: list[TextBox]) -> tuple[list[Marker], list[TextBox]]:
    """Split recognized text boxes into single-letter markers and labels.

    Duplicate letters keep the smallest box as the marker; the rest demote
    to labels.
    """
    by_letter: dict[str, list[TextBox]] = {}
    labels: list[TextBox] = []
    for tb in text_boxes:
        m = _MARKER_BOX_RE.match(tb.text.strip())
        if m:
            letter = next(g for g in m.groups() if g).upper()
            by_letter.setdefault(letter, []).append(tb)
        else:
            labels.append(tb)
    markers: list[Marker] = []
    for letter in sorted(by_letter):
        boxes = sorted(by_letter[letter], key=lambda tb: (tb.box.area, tb.box.x0, tb.box.y0))
        markers.append(Marker(letter=letter, box=boxes[0]))
        labels.extend(boxes[1:])
    return markers, labels


def assign_markers(markers: list[Marker], regions: list[Box]) -> dict[Optional[str], list[int]]:
    """Each region picks its nearest marker (edge distance, ties by letter)."""
    if not markers:
        return {None: list(range(len(regions)))} if regions else {}
    assignment: dict[Optional[str], list[int]] = {m.letter: [] for m in markers}
    for i, region in enumerate(regions):
        best = min(markers, key=lambda m: (m.box.box.edge_distance(region), m.letter))
        assignment[best.letter].append(i)
    return assignment


def merge_regions(
    assignment: dict[Optional[str], list[int]], regions: list[Box]
) -> list[SubfigureRecord]:
    records = []
    for marker, indices in assignment.items():
        if not indices:
            continue
        members = [regions[i] for i in indices]
        records.append(SubfigureRecord(marker=marker, bbox=hull(members), regions=members))
    records.sort(key=lambda r: (r.marker is None, r.marker or "", r.bbox.y0, r.bbox.x0))
    return records


@dataclass
class CaptionSplit:
    preamble: str
    fragments: list[tuple[str, str, str]]  # (letter, marker token text, fragment)

    def mapping(self) -> dict[str, str]:
        out: dict[str, str] = {}
        if self.preamble or not self.fragments:
            out[PREAMBLE_KEY] = self.preamble
        for letter, _, fragment in self.fragments:
            out[letter] = fragment
        return out


def split_caption(caption: str) -> CaptionSplit:
    """Split a caption into lettered subcaptions.

    Parenthesized markers are accepted anywhere; bare ``X)``/``X.`` forms
    only at the caption start or right after a sentence break. Letters must
    ascend strictly starting at A, which keeps abbreviations and stray
    capitals ("vitamin D.") out of the marker sequence.
    """
    fragment_starts = {0} | {m.end() for m in _FRAGMENT_START_RE.finditer(caption)}
    found: list[tuple[int, int, str, str]] = []  # (start, end, letter, token text)
    last_letter = ""
    pos = 0
    while pos < len(caption):
        m = _CAPTION_OPEN_RE.match(caption, pos)
        if m:
            letter = next(g for g in m.groups() if g).upper()
            parenthesized = m.group(1) is not None
            allowed_here = parenthesized or pos in fragment_starts
            ascending = letter == "A" if not found else letter > last_letter
            if allowed_here and ascending:
                found.append((m.start(), m.end(), letter, m.group(0)))
                last_letter = letter
                pos = m.end()
                continue
        pos += 1

    if not found:
        return CaptionSplit(preamble=caption.strip(), fragments=[])
    preamble = caption[: found[0][0]].strip()
    fragments = []
    for i, (start, end, letter, token) in enumerate(found):
        tail = caption[end : found[i + 1][0]] if i + 1 < len(found) else caption[end:]
        fragments.append((letter, token, tail.strip()))
    return CaptionSplit(preamble=preamble, fragments=fragments)


def reconstruct_caption(split: CaptionSplit) -> str:
    """Preamble + marker tokens + fragments, whitespace-normalized."""
    parts = [split.preamble]
    for _, token, fragment in split.fragments:
        parts.append(token)
        parts.append(fragment)
    return " ".join(" ".join(parts).split())


@dataclass
class AlignResult:
    records: list[SubfigureRecord]
    leftovers: list[str]
    groundings: list[GroundingTriple] = field(default_factory=list)


def build_alias_index(entities) -> dict[str, str]:
    """alias text -> entity id; collisions resolve to the smallest id."""
    index: dict[str, str] = {}
    for rec in entities:
        for alias in rec.aliases:
            if alias not in index or rec.id < index[alias]:
                index[alias] = rec.id
    return index


def align(
    subfigures: list[SubfigureRecord],
    caption_split: CaptionSplit | dict[str, str],
    figure_id: Optional[str] = None,
    alias_index: Optional[dict[str, str]] = None,
    paper_id: Optional[str] = None,
) -> AlignResult:
    mapping = (
        caption_split.mapping() if isinstance(caption_split, CaptionSplit) else dict(caption_split)
    )
    preamble = mapping.get(PREAMBLE_KEY, "")
    matched: set[str] = set()
    records = []
    for record in subfigures:
        if record.marker is not None and record.marker in mapping:
            subcaption = mapping[record.marker]
            matched.add(record.marker)
        else:
            subcaption = preamble
        records.append(replace_subcaption(record, subcaption))
    leftovers = [k for k in mapping if k != PREAMBLE_KEY and k not in matched]

    groundings: list[GroundingTriple] = []
    if alias_index:
        for record in records:
            for label in record.labels:
                entity_id = alias_index.get(label.text.strip())
                if entity_id is not None:
                    groundings.append(
                        GroundingTriple(
                            figure_id=figure_id or "",
                            marker=record.marker,
                            entity_id=entity_id,
                            paper_id=paper_id,
                        )
                    )
    return AlignResult(records=records, leftovers=leftovers, groundings=groundings)


def replace_subcaption(record: SubfigureRecord, subcaption: str) -> SubfigureRecord:
    return SubfigureRecord(
        marker=record.marker,
        bbox=record.bbox,
        regions=list(record.regions),
        labels=list(record.labels),
        subcaption=subcaption,
    )


# --- whole-layout pipeline -----------------------------------------------


@dataclass(frozen=True)
class FigureLayout:
    figure_id: str
    width: float
    height: float
    regions: tuple[Box, ...]
    text_boxes: tuple[TextBox, ...]
    caption: str
    paper_id: Optional[str] = None


def _box_from(r) -> Box:
    if isinstance(r, dict):
        return Box(float(r["x0"]), float(r["y0"]), float(r["x1"]), float(r["y1"]))
    return Box(*(float(v) for v in r))


def parse_layout(obj: dict) -> FigureLayout:
    if not isinstance(obj, dict):
        raise SchemaError("layout must be a JSON object")
    try:
        regions = tuple(_box_from(r) for r in obj["regions"])
        text_boxes = tuple(
            TextBox(box=Box(tb["x0"], tb["y0"], tb["x1"], tb["y1"]), text=str(tb["text"]))
            for tb in obj["text_boxes"]
        )
        return FigureLayout(
            figure_id=str(obj["figure_id"]),
            width=float(obj["width"]),
            height=float(obj["height"]),
            regions=regions,
            text_boxes=text_boxes,
            caption=str(obj["caption"]),
            paper_id=obj.get("paper_id"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad layout object: {exc}") from exc


def analyze_layout(
    layout: FigureLayout | dict,
    alias_index: Optional[dict[str, str]] = None,
) -> AlignResult:
    if isinstance(layout, dict):
        layout = parse_layout(layout)
    markers, labels = detect_markers(list(layout.text_boxes))
    assignment = assign_markers(markers, list(layout.regions))
    records = merge_regions(assignment, list(layout.regions))
    for record in records:
        record.labels = [tb for tb in labels if tb.box.intersects(record.bbox)]
    split = split_caption(layout.caption)
    return align(
        records,
        split,
        figure_id=layout.figure_id,
        alias_index=alias_index,
        paper_id=layout.paper_id,
    )


def layout_result_to_json(result: AlignResult) -> str:
    payload = {
        "subfigures": [r.to_dict() for r in result.records],
        "leftover_subcaptions": result.leftovers,
        "groundings": [
            {
                "figure_id": g.figure_id,
                "marker": g.marker,
                "entity_id": g.entity_id,
                "paper_id": g.paper_id,
            }
            for g in result.groundings
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
