import csv
import io
import json
import logging
import re
from pathlib import Path
from typing import Iterator, Literal

from pydantic import ValidationError

from moonshine.config import TABLE_TERMS
from moonshine.decomposition import sign_violations
from moonshine.models import (
    MAX_CHI,
    CharacterColumn,
    ChecksumEntry,
    ChecksumFile,
    CorpusFile,
    DegreeFile,
    LevelRecord,
    VerificationReport,
)

logger = logging.getLogger(__name__)

CORPUS_HEADER = ["chi", *(f"a{i}" for i in range(TABLE_TERMS))]
DEGREES_HEADER = ["chi", "degree"]
CHECKSUMS_HEADER = ["chi", "total", "moment"]
LEVELS_HEADER = ["n", "h", "chi_nonzero"]

_INTEGER = re.compile(r"-?[0-9]+")
_BOOLEANS = {"true": True, "false": False, "1": True, "0": False}

ReportFormat = Literal["text", "json"]


class CorpusParseError(Exception):
    def __init__(self, line: int, field: str | None, message: str):
        self.line = line
        self.field = field
        location = f"line {line}" + (f", field {field}" if field else "")
        super().__init__(f"{location}: {message}")


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CorpusParseError(1, None, f"input is not UTF-8: {e}") from e
    return data


def _rows(data: bytes | str, header: list[str]) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, stripped cells) for data rows; skips comments and blank lines."""
    text = _decode(data)
    seen_header = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if not seen_header:
            if cells != header:
                shown = ",".join(header[:4]) + ("..." if len(header) > 4 else "")
                raise CorpusParseError(lineno, None, f"expected header {shown}")
            seen_header = True
            continue
        yield lineno, cells
    if not seen_header:
        raise CorpusParseError(1, None, "missing header")


def _comments(data: bytes | str) -> str:
    lines = _decode(data).splitlines()
    return "\n".join(line.lstrip()[1:].strip() for line in lines if line.lstrip().startswith("#"))


def _integer(cell: str, lineno: int, field: str) -> int:
    if not _INTEGER.fullmatch(cell):
        raise CorpusParseError(lineno, field, f"non-integer cell {cell!r}")
    return int(cell)


def _expect_width(cells: list[str], width: int, lineno: int, what: str) -> None:
    if len(cells) != width:
        raise CorpusParseError(lineno, None, f"expected {width - 1} {what}, found {len(cells) - 1}")


def parse_corpus(data: bytes | str, strict: bool = True) -> CorpusFile:
    """Parse the corpus CSV dialect; with strict=False sign violations are left to verification."""
    columns: list[CharacterColumn] = []
    seen: set[int] = set()
    for lineno, cells in _rows(data, CORPUS_HEADER):
        _expect_width(cells, len(CORPUS_HEADER), lineno, "coefficients")
        chi = _integer(cells[0], lineno, "chi")
        if not 1 <= chi <= MAX_CHI:
            raise CorpusParseError(lineno, "chi", f"chi {chi} outside 1..{MAX_CHI}")
        if chi in seen:
            raise CorpusParseError(lineno, "chi", f"duplicate chi {chi}")
        if columns and chi < columns[-1].chi:
            raise CorpusParseError(lineno, "chi", f"chi {chi} out of order after {columns[-1].chi}")
        seen.add(chi)
        coeffs = tuple(_integer(cell, lineno, f"a{i}") for i, cell in enumerate(cells[1:]))
        column = CharacterColumn(chi=chi, coeffs=coeffs)
        bad = sign_violations(column)
        if bad:
            if strict:
                raise CorpusParseError(lineno, f"a{bad[0]}", f"sign violation for chi {chi}")
            logger.warning("chi=%d breaks the sign pattern at h=%s", chi, bad)
        columns.append(column)
    logger.info("Parsed %d corpus columns", len(columns))
    return CorpusFile(columns=columns, source_note=_comments(data))


def emit_corpus(corpus: CorpusFile) -> bytes:
    out = io.StringIO()
    for line in corpus.source_note.splitlines():
        out.write(f"# {line}\n" if line else "#\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CORPUS_HEADER)
    for column in corpus.columns:
        writer.writerow([column.chi, *column.coeffs])
    return out.getvalue().encode("utf-8")


def parse_degrees(data: bytes | str) -> DegreeFile:
    entries: dict[int, int] = {}
    for lineno, cells in _rows(data, DEGREES_HEADER):
        _expect_width(cells, len(DEGREES_HEADER), lineno, "value")
        chi = _integer(cells[0], lineno, "chi")
        degree = _integer(cells[1], lineno, "degree")
        if degree <= 0:
            raise CorpusParseError(lineno, "degree", f"non-positive degree {degree}")
        if chi in entries:
            raise CorpusParseError(lineno, "chi", f"duplicate chi {chi}")
        entries[chi] = degree
    try:
        return DegreeFile(entries=entries)
    except ValidationError as e:
        raise CorpusParseError(0, "degree", str(e.errors()[0].get("msg"))) from e


def parse_checksums(data: bytes | str) -> ChecksumFile:
    entries: dict[int, ChecksumEntry] = {}
    for lineno, cells in _rows(data, CHECKSUMS_HEADER):
        _expect_width(cells, len(CHECKSUMS_HEADER), lineno, "values")
        chi = _integer(cells[0], lineno, "chi")
        if chi in entries:
            raise CorpusParseError(lineno, "chi", f"duplicate chi {chi}")
        entries[chi] = ChecksumEntry(
            chi=chi,
            total=_integer(cells[1], lineno, "total"),
            moment=_integer(cells[2], lineno, "moment"),
        )
    return ChecksumFile(entries=entries)


def parse_level_records(data: bytes | str) -> list[LevelRecord]:
    records = []
    for lineno, cells in _rows(data, LEVELS_HEADER):
        _expect_width(cells, len(LEVELS_HEADER), lineno, "values")
        n = _integer(cells[0], lineno, "n")
        h = _integer(cells[1], lineno, "h")
        flag = _BOOLEANS.get(cells[2].lower())
        if flag is None:
            raise CorpusParseError(lineno, "chi_nonzero", f"expected true/false, got {cells[2]!r}")
        if n <= 0 or h <= 0:
            raise CorpusParseError(lineno, "n" if n <= 0 else "h", "must be positive")
        records.append(LevelRecord(n=n, h_divisor=h, chi_nonzero=flag))
    return records


def _read(path: Path) -> bytes:
    logger.debug("Reading %s", path)
    return Path(path).read_bytes()


def load_corpus(path: Path, strict: bool = True) -> CorpusFile:
    return parse_corpus(_read(path), strict=strict)


def load_degrees(path: Path) -> DegreeFile:
    return parse_degrees(_read(path))


def load_checksums(path: Path) -> ChecksumFile:
    return parse_checksums(_read(path))


def load_level_records(path: Path) -> list[LevelRecord]:
    return parse_level_records(_read(path))


def report_payload(report: VerificationReport) -> dict:
    # field order of CheckResult is the key order of the report
    checks = [check.model_dump(mode="json", exclude_none=True) for check in report.sorted().checks]
    return {"overall": report.overall, "checks": checks}


def emit_report(report: VerificationReport, fmt: ReportFormat = "text") -> bytes:
    if fmt == "json":
        payload = report_payload(report)
        return (json.dumps(payload, separators=(",", ":")) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"Unknown report format {fmt!r}")

    lines = []
    for check in report.sorted().checks:
        parts = [f"CHECK {check.name}"]
        if check.chi is not None:
            parts.append(f"chi={check.chi}")
        if check.h is not None:
            parts.append(f"h={check.h}")
        parts.append(f"status={check.status}")
        if check.expected is not None:
            parts.append(f"expected={check.expected}")
        if check.actual is not None:
            parts.append(f"actual={check.actual}")
        if check.message:
            parts.append(f"message={check.message!r}")
        lines.append(" ".join(parts))
    lines.append(f"OVERALL status={report.overall} checks={len(report.checks)}")
    return ("\n".join(lines) + "\n").encode("utf-8")
