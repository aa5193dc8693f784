"""Parsing of archived IRC-style chat logs into a time-ordered corpus.

Log files are plain text, one message per physical line, with channel-local
``[HH:MM]`` timestamps (a seconds-bearing ``[HH:MM:SS]`` variant is accepted,
archive styles vary by year).  Three line shapes are recognized:

    [08:43] <mdz> lifeless: ok, it sounds like you're agreeing with me, then
    [08:45] * fabbione nods
    [08:46] *** lifeless has joined #channel

Everything else is skipped and counted, never fatal: chat archives are
informal and a parser that aborts on one bad line is useless on them.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

USER_MESSAGE = "user_message"
ACTION = "action"
SYSTEM = "system"
KINDS = (USER_MESSAGE, ACTION, SYSTEM)

# Channel operator / voice markers that some archives keep on the nick.
_STATUS_PREFIXES = "@+"

_TIME = r"\[(\d{1,2}):(\d{2})(?::(\d{2}))?\]"
_USER_RE = re.compile(_TIME + r" <([^\s<>]+)>(?: (.*))?$")
_ACTION_RE = re.compile(_TIME + r" \* ([^\s<>]+)(?: (.*))?$")
_NOTICE_RE = re.compile(_TIME + r" (?:\*\*\*|===) (.+)$")
_NOTICE_EVENT_RE = re.compile(
    r"^([^\s<>]+) (?:\[[^\]]*\] )?"
    r"(?:has joined|has left|has parted|has quit|changed the topic)\b"
)
_LOG_NAME_RE = re.compile(r"(\d{4})-(\d{2})-(\d{2})")


@dataclass(frozen=True)
class ChatMessage:
    """One parsed log line attributed to a sender."""

    date: dt.date
    time: str  # "HH:MM", channel-local 24h clock
    nick: str
    body: str
    kind: str

    def to_record(self) -> dict:
        return {
            "date": self.date.isoformat(),
            "time": self.time,
            "nick": self.nick,
            "body": self.body,
            "kind": self.kind,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ChatMessage":
        kind = record["kind"]
        if kind not in KINDS:
            raise ValueError(f"unknown message kind {kind!r}")
        return cls(
            date=dt.date.fromisoformat(record["date"]),
            time=record["time"],
            nick=record["nick"],
            body=record["body"],
            kind=kind,
        )


@dataclass(frozen=True)
class FileStats:
    """Per-file parse accounting: parsed + skipped == total_lines."""

    path: str
    date: dt.date
    parsed: int
    skipped: int
    total_lines: int


@dataclass(frozen=True)
class ChatCorpus:
    """Time-ordered messages concatenated over the input files."""

    messages: tuple[ChatMessage, ...]
    file_stats: tuple[FileStats, ...]

    @property
    def message_count(self) -> int:
        return len(self.messages)

    @property
    def skipped_count(self) -> int:
        return sum(s.skipped for s in self.file_stats)

    @property
    def source_files(self) -> tuple[tuple[str, dt.date], ...]:
        return tuple((s.path, s.date) for s in self.file_stats)


@dataclass(frozen=True)
class Roster:
    """Participants who authored at least one message, keyed by case-folded nick."""

    counts: dict[str, int]

    @property
    def nicks(self) -> frozenset[str]:
        return frozenset(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, nick: str) -> bool:
        return nick.casefold() in self.counts


def _clock(hh: str, mm: str) -> str | None:
    h, m = int(hh), int(mm)
    if h > 23 or m > 59:
        return None
    return f"{h:02d}:{m:02d}"


def parse_line(line: str, date: dt.date) -> ChatMessage | None:
    """Parse one physical log line for the given file date.

    Returns None for anything that does not match the message, action, or
    recognized-notice grammars; callers count those lines as skipped.
    """
    line = line.rstrip("\r\n")
    m = _USER_RE.match(line)
    if m:
        hh, mm, _sec, nick, body = m.groups()
        time = _clock(hh, mm)
        nick = nick.lstrip(_STATUS_PREFIXES)
        if time is None or not nick:
            return None
        return ChatMessage(date, time, nick, body or "", USER_MESSAGE)
    m = _ACTION_RE.match(line)
    if m:
        hh, mm, _sec, nick, body = m.groups()
        time = _clock(hh, mm)
        nick = nick.lstrip(_STATUS_PREFIXES)
        if time is None or not nick:
            return None
        return ChatMessage(date, time, nick, body or "", ACTION)
    m = _NOTICE_RE.match(line)
    if m:
        hh, mm, _sec, rest = m.groups()
        time = _clock(hh, mm)
        event = _NOTICE_EVENT_RE.match(rest)
        if time is None or event is None:
            return None
        nick = event.group(1).lstrip(_STATUS_PREFIXES)
        if not nick:
            return None
        return ChatMessage(date, time, nick, rest, SYSTEM)
    return None


def _coerce_date(value) -> dt.date:
    if isinstance(value, dt.date):
        return value
    return dt.date.fromisoformat(str(value))


def _parse_one_file(path: str, date: dt.date) -> tuple[list[ChatMessage], FileStats]:
    try:
        text = Path(path).read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        raise OSError(f"cannot read log file '{path}': {exc}") from exc
    messages = []
    skipped = 0
    lines = text.splitlines()
    for line in lines:
        msg = parse_line(line, date)
        if msg is None:
            skipped += 1
        else:
            messages.append(msg)
    stats = FileStats(path, date, len(messages), skipped, len(lines))
    return messages, stats


def parse_corpus(files: Sequence[tuple[str, object]], threads: int = 1) -> ChatCorpus:
    """Parse log files given as (path, date) pairs, in the order given.

    Files may be parsed concurrently; the corpus is always assembled in the
    declared file order, so the result does not depend on scheduling.
    """
    entries = [(str(path), _coerce_date(date)) for path, date in files]
    if not entries:
        raise ValueError("empty input set")
    for (_, before), (_, after) in zip(entries, entries[1:]):
        if after <= before:
            raise ValueError("file dates must be strictly increasing")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda e: _parse_one_file(*e), entries))
    else:
        parts = [_parse_one_file(path, date) for path, date in entries]
    messages: list[ChatMessage] = []
    stats: list[FileStats] = []
    for msgs, st in parts:
        messages.extend(msgs)
        stats.append(st)
    return ChatCorpus(tuple(messages), tuple(stats))


def build_roster(corpus: ChatCorpus, prior_nicks: Iterable[str] = ()) -> Roster:
    """Distinct case-folded nicks over user messages and actions, with counts.

    ``prior_nicks`` folds in an externally supplied participant list (users
    known from a larger archive); such entries keep a zero count here.
    """
    counts: dict[str, int] = {}
    for msg in corpus.messages:
        if msg.kind == SYSTEM:
            continue
        nick = msg.nick.casefold()
        counts[nick] = counts.get(nick, 0) + 1
    for nick in prior_nicks:
        counts.setdefault(nick.casefold(), 0)
    return Roster(counts)


def corpus_jsonl_text(corpus: ChatCorpus) -> str:
    """Newline-delimited JSON serialization, one record per message."""
    lines = [json.dumps(m.to_record(), ensure_ascii=False) for m in corpus.messages]
    return "".join(line + "\n" for line in lines)


def write_corpus_jsonl(corpus: ChatCorpus, path) -> None:
    Path(path).write_text(corpus_jsonl_text(corpus), encoding="utf-8")


def read_corpus_jsonl(path) -> ChatCorpus:
    """Load a corpus previously written by ``write_corpus_jsonl``.

    Per-date file stats are synthesized (the JSONL stream does not retain the
    original per-file skip counts).
    """
    messages = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                messages.append(ChatMessage.from_record(json.loads(line)))
            except (KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad corpus record: {exc}") from exc
    per_date: dict[dt.date, int] = {}
    for msg in messages:
        per_date[msg.date] = per_date.get(msg.date, 0) + 1
    stats = tuple(
        FileStats(str(path), date, count, 0, count)
        for date, count in per_date.items()
    )
    return ChatCorpus(tuple(messages), stats)


def read_roster_file(path) -> list[str]:
    """Prior participant list: one nick per line, '#' comments allowed."""
    nicks = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        entry = raw.strip()
        if entry and not entry.startswith("#"):
            nicks.append(entry)
    return nicks


def date_from_filename(path) -> dt.date | None:
    """Extract the log date from names like ``2011-06-02.txt``, else None."""
    m = _LOG_NAME_RE.search(Path(path).name)
    if not m:
        return None
    try:
        return dt.date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    except ValueError:
        return None


def discover_log_files(paths: Iterable[str]) -> list[tuple[str, dt.date]]:
    """Resolve files/directories to (path, date) pairs via the name convention.

    Directories are scanned non-recursively for ``*.txt`` and ``*.log``.
    The result is sorted by date; undatable filenames are an error.
    """
    candidates: list[Path] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            candidates.extend(
                entry
                for entry in sorted(path.iterdir())
                if entry.suffix in (".txt", ".log") and entry.is_file()
            )
        else:
            candidates.append(path)
    resolved = []
    for path in candidates:
        date = date_from_filename(path)
        if date is None:
            raise ValueError(
                f"cannot infer a date from '{path}' (expected YYYY-MM-DD in the "
                "name); use a manifest instead"
            )
        resolved.append((str(path), date))
    resolved.sort(key=lambda pair: (pair[1], pair[0]))
    return resolved


def read_manifest(path) -> list[tuple[str, dt.date]]:
    """Explicit file-to-date mapping: CSV lines ``path,YYYY-MM-DD``."""
    entries = []
    base = Path(path).parent
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            file_part, date_part = line.rsplit(",", 1)
            date = dt.date.fromisoformat(date_part.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad manifest line: {raw!r}") from exc
        file_path = Path(file_part.strip())
        if not file_path.is_absolute():
            file_path = base / file_path
        entries.append((str(file_path), date))
    return entries
