"""CSV and preset-document writers/readers used by the CLI.

All CSV output uses a header row, ``.`` decimals and LF line endings.
Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from .bank_layout import BandSpec, custom_preset


def _num(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else _num(v) for v in row])
    return buf.getvalue()


def preset_csv(preset) -> str:
    rows = [
        (i, b.lower_cutoff, b.upper_cutoff, b.nominal_bandwidth)
        for i, b in enumerate(preset.bands, start=1)
    ]
    return to_csv(["index", "lower_hz", "upper_hz", "nominal_bw_hz"], rows)


def read_preset_csv(text: str, scale_kind):
    """Inverse of :func:`preset_csv`; rows are taken in index order."""
    reader = csv.DictReader(io.StringIO(text))
    rows = sorted(reader, key=lambda r: int(r["index"]))
    bands = [
        BandSpec(float(r["lower_hz"]), float(r["upper_hz"]), float(r["nominal_bw_hz"]))
        for r in rows
    ]
    return custom_preset(scale_kind, bands)


def coefficients_csv(filt) -> str:
    return to_csv(["tap", "coefficient"], enumerate(filt.coefficients))


def response_csv(resp) -> str:
    return to_csv(
        ["frequency_hz", "magnitude_db", "phase_rad"],
        zip(resp.frequencies, resp.magnitude_db, resp.phase),
    )


def combined_response_csv(responses) -> str:
    header = ["frequency_hz"] + [f"band_{k:02d}_db" for k in range(len(responses))]
    cols = [responses[0].frequencies] + [r.magnitude_db for r in responses]
    return to_csv(header, zip(*cols))


def run_csv(result) -> str:
    outputs = [s.samples for s in result.per_filter_outputs]
    header = ["sample_index"] + [f"filter_{k:02d}" for k in range(len(outputs))] + ["summed"]
    n = len(result.summed_output)
    cols = [range(n)] + outputs + [result.summed_output.samples]
    return to_csv(header, zip(*cols))


def energies_csv(energies) -> str:
    return to_csv(["band_index", "energy"], enumerate(energies, start=1))


def comparison_csv(cmp) -> str:
    rows = zip(
        range(1, len(cmp.per_band_cosine) + 1),
        cmp.per_band_cosine,
        cmp.per_band_rms_diff,
        cmp.response_rms_diff_db,
    )
    return to_csv(["band_index", "cosine", "coef_rms_diff", "response_rms_diff_db"], rows)
