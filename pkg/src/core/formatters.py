"""
Output formatters for experiment results.
Supports console table, Markdown, JSON and CSV formats, plus the CSV
result file reader.
"""

import csv
import io
import json
import textwrap
from typing import Iterable

from jinja2 import Template

from src.core.experiment import ResultRow
from src.exceptions import GraphDataError, ParameterError

CSV_FIELDS = [
    "network", "n", "m", "n_scc", "m_scc", "method", "k",
    "objective", "chosen", "seed", "wall_time_s",
]

CHOSEN_SEPARATOR = ";"


def _real(value: float) -> str:
    # 17 significant digits round-trip every float64
    return format(value, ".17g")


def _label(token: str):
    # only canonical integers come back as int; "007" stays a string
    try:
        value = int(token)
    except ValueError:
        return token
    return value if str(value) == token else token


def _written(rows: Iterable[ResultRow]) -> list[ResultRow]:
    return [row for row in rows if not row.skipped]


def format_csv(rows: Iterable[ResultRow]) -> str:
    """
    Format result rows as CSV (skipped rows are left out).

    Args:
        rows: Result rows in output order

    Returns:
        CSV formatted string with a header line
    """
    output = io.StringIO()
    writer = csv.DictWriter(output, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()

    for row in _written(rows):
        writer.writerow({
            "network": row.network,
            "n": row.n,
            "m": row.m,
            "n_scc": row.n_scc,
            "m_scc": row.m_scc,
            "method": row.method,
            "k": row.k,
            "objective": _real(row.objective),
            "chosen": CHOSEN_SEPARATOR.join(str(v) for v in row.chosen),
            "seed": row.seed,
            "wall_time_s": _real(row.wall_time),
        })

    return output.getvalue()


def write_results_csv(rows: Iterable[ResultRow], path: str) -> int:
    """
    Write result rows to a CSV file.

    Returns:
        Number of rows written

    Raises:
        GraphDataError: If the file cannot be written
    """
    rows = list(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(format_csv(rows))
    except OSError as e:
        raise GraphDataError(f"Cannot write results to {path}: {e}")
    return len(_written(rows))


def read_results_csv(path: str) -> list[ResultRow]:
    """
    Read a results CSV back into ResultRow objects.

    Raises:
        GraphDataError: If the header does not match the result schema
    """
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != CSV_FIELDS:
            raise GraphDataError(f"Unexpected CSV header in {path}: {reader.fieldnames}")
        rows = []
        for record in reader:
            chosen = record["chosen"]
            rows.append(ResultRow(
                network=record["network"],
                n=int(record["n"]),
                m=int(record["m"]),
                n_scc=int(record["n_scc"]),
                m_scc=int(record["m_scc"]),
                method=record["method"],
                k=int(record["k"]),
                objective=float(record["objective"]),
                chosen=[_label(v) for v in chosen.split(CHOSEN_SEPARATOR)] if chosen else [],
                seed=int(record["seed"]),
                wall_time=float(record["wall_time_s"]),
            ))
    return rows


def format_markdown(rows: Iterable[ResultRow]) -> str:
    """
    Format result rows as a Markdown report, one table per network.

    Args:
        rows: Result rows

    Returns:
        Markdown formatted string
    """
    networks: dict[str, list[ResultRow]] = {}
    for row in rows:
        networks.setdefault(row.network, []).append(row)

    report_template = textwrap.dedent("""\
        # Resistance Distance Minimization
        {% for name, group in networks.items() %}
        ## {{ name }}

        **n:** {{ group[0].n }} | **m:** {{ group[0].m }} | **n':** {{ group[0].n_scc }} | **m':** {{ group[0].m_scc }}

        | method | k | objective | chosen | seed |
        | --- | --- | --- | --- | --- |
        {% for row in group -%}
        | {{ row.method }} | {{ row.k }} | {{ "skipped" if row.skipped else "%.6f"|format(row.objective) }} | {{ row.chosen|join(", ") }} | {{ row.seed }} |
        {% endfor %}
        {% endfor %}""")

    template = Template(report_template)
    return template.render(networks=networks).rstrip() + "\n"


def format_json(rows: Iterable[ResultRow], pretty: bool = True) -> str:
    """
    Format result rows as JSON.

    Args:
        rows: Result rows
        pretty: If True, format with indentation

    Returns:
        JSON formatted string
    """
    data = [
        {
            "network": row.network,
            "n": row.n,
            "m": row.m,
            "n_scc": row.n_scc,
            "m_scc": row.m_scc,
            "method": row.method,
            "k": row.k,
            "objective": None if row.skipped else row.objective,
            "chosen": list(row.chosen),
            "seed": row.seed,
            "wall_time_s": row.wall_time,
            "skipped": row.skipped,
        }
        for row in rows
    ]

    if pretty:
        return json.dumps(data, indent=2, ensure_ascii=False)
    return json.dumps(data, ensure_ascii=False)


def format_table(rows: Iterable[ResultRow]) -> str:
    """
    Format result rows as a console table.

    Args:
        rows: Result rows

    Returns:
        Formatted table string for console output
    """
    rows = list(rows)
    lines = []
    lines.append(f"\n{'='*80}")
    lines.append("  Resistance Distance Minimization")
    if rows:
        first = rows[0]
        lines.append(f"  Network: {first.network}  n={first.n} m={first.m}  n'={first.n_scc} m'={first.m_scc}")
    lines.append(f"{'='*80}\n")

    header = f"{'Method':<12} {'k':<4} {'Objective':<20} {'Seed':<8} {'Chosen'}"
    lines.append(header)
    lines.append("-" * 80)

    for row in rows:
        objective = "skipped" if row.skipped else f"{row.objective:.10g}"
        chosen = ", ".join(str(v) for v in row.chosen)
        lines.append(f"{row.method:<12} {row.k:<4} {objective:<20} {row.seed:<8} {chosen}")

    lines.append("")
    return "\n".join(lines)


def format_results(rows: Iterable[ResultRow], format_type: str = "table") -> str:
    """
    Format result rows using specified format type.

    Args:
        rows: Result rows
        format_type: One of 'table', 'markdown', 'json', 'csv'

    Returns:
        Formatted string
    """
    formatters = {
        "table": format_table,
        "markdown": format_markdown,
        "json": format_json,
        "csv": format_csv,
    }

    formatter = formatters.get(format_type.lower())
    if not formatter:
        raise ParameterError(f"Unknown format type: {format_type}. Valid options: {list(formatters.keys())}")

    return formatter(rows)
