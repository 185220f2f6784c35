"""Reading and writing parameter and packet files.

Parameter files are JSON with every field element spelled out as a
little-endian coordinate list of decimal integers, so a set of published
parameters can be audited with nothing but a text editor.  Packet files
carry a one-line header ``subtag-packets/1 q l kdim M V`` followed by the
packets either as decimal symbol lines or, in binary mode, as fixed-width
big-endian symbols.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

from .codes import LinearCode
from .ec import AGCodeSpec, ECPoint, EllipticCurve, residue_code
from .errors import InvalidParams, LengthMismatch
from .fields import BaseField, ExtField, FieldElement
from .linalg import Matrix
from .scheme import PublicParams, TaggedPacket

__all__ = [
    "PARAMS_FORMAT",
    "PACKETS_FORMAT",
    "params_to_dict",
    "params_from_dict",
    "write_params",
    "read_params",
    "write_packets",
    "read_packets",
    "dump_json",
]

PARAMS_FORMAT = "subtag-params/1"
PACKETS_FORMAT = "subtag-packets/1"


def dump_json(obj) -> str:
    """Canonical JSON rendering: sorted keys, two-space indent, newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _coords(e: FieldElement) -> list[int]:
    return list(e.coords)


def _point_to_json(p: ECPoint):
    if p.is_infinity:
        return "O"
    return [_coords(p.x), _coords(p.y)]


def params_to_dict(pp: PublicParams, curve_spec: Optional[AGCodeSpec] = None) -> dict:
    gen = [[_coords(e) for e in row] for row in pp.code.generator.rows]
    doc = {
        "format": PARAMS_FORMAT,
        "base": {"p": pp.base.p, "m": pp.base.m, "modulus": list(pp.base.modulus)},
        "ext": {"l": pp.ext.l, "modulus": list(pp.ext.modulus)},
        "scheme": {"n": pp.n, "M": pp.M, "iso": pp.iso},
        "code": {"length": pp.V, "kdim": pp.kdim, "generator": gen},
    }
    if curve_spec is not None:
        doc["curve"] = {
            "a": _coords(curve_spec.curve.a),
            "b": _coords(curve_spec.curve.b),
            "degree": curve_spec.degree,
            "points": [_point_to_json(p) for p in curve_spec.points],
        }
    return doc


def params_from_dict(doc: dict) -> tuple[PublicParams, Optional[AGCodeSpec]]:
    try:
        if doc["format"] != PARAMS_FORMAT:
            raise InvalidParams(f"unknown params format {doc.get('format')!r}")
        base = BaseField(doc["base"]["p"], doc["base"]["m"], doc["base"]["modulus"])
        ext = ExtField(base, doc["ext"]["l"], doc["ext"]["modulus"])
        code_doc = doc["code"]
        rows = [
            tuple(ext.from_coords(entry) for entry in row)
            for row in code_doc["generator"]
        ]
        gen = Matrix(ext, rows, ncols=code_doc["length"])
        if gen.nrows != code_doc["kdim"]:
            raise InvalidParams("generator row count disagrees with kdim")
        code = LinearCode(gen)
        pp = PublicParams(
            base=base,
            ext=ext,
            n=doc["scheme"]["n"],
            M=doc["scheme"]["M"],
            code=code,
            iso=doc["scheme"].get("iso", "poly-basis-le"),
        )
        curve_spec = None
        if "curve" in doc:
            cdoc = doc["curve"]
            curve = EllipticCurve(
                ext, ext.from_coords(cdoc["a"]), ext.from_coords(cdoc["b"])
            )
            points = []
            for pt in cdoc["points"]:
                if pt == "O":
                    raise InvalidParams("the pole point cannot be in the support")
                points.append(
                    ECPoint(curve, ext.from_coords(pt[0]), ext.from_coords(pt[1]))
                )
            curve_spec = AGCodeSpec(curve, tuple(points), cdoc["degree"])
            if residue_code(curve_spec).generator != code.generator:
                raise InvalidParams(
                    "stored generator is not the residue code of the stored curve"
                )
        return pp, curve_spec
    except KeyError as missing:
        raise InvalidParams(f"params file is missing {missing}") from None


def write_params(path: str, pp: PublicParams, curve_spec: Optional[AGCodeSpec] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(params_to_dict(pp, curve_spec)))


def read_params(path: str) -> tuple[PublicParams, Optional[AGCodeSpec]]:
    with open(path, "r", encoding="utf-8") as fh:
        return params_from_dict(json.load(fh))


def _packet_header(pp: PublicParams) -> str:
    return (
        f"{PACKETS_FORMAT} {pp.base.order} {pp.l} {pp.kdim} {pp.M} {pp.V}"
    )


def write_packets(
    path: str,
    pp: PublicParams,
    packets: Sequence[TaggedPacket],
    binary: bool = False,
) -> None:
    header = _packet_header(pp)
    if not binary:
        lines = [header]
        for pkt in packets:
            lines.append(" ".join(str(v) for v in pkt.symbols()))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        return
    width = max(1, ((pp.base.order - 1).bit_length() + 7) // 8)
    with open(path, "wb") as fh:
        fh.write((header + "\n").encode("ascii"))
        for pkt in packets:
            for v in pkt.symbols():
                fh.write(v.to_bytes(width, "big"))


def read_packets(path: str, pp: PublicParams, binary: bool = False) -> tuple[TaggedPacket, ...]:
    expect = _packet_header(pp)
    if not binary:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
        if not lines or lines[0] != expect:
            raise InvalidParams("packet file header does not match the parameters")
        return tuple(
            TaggedPacket.from_symbols(pp, [int(v) for v in ln.split()])
            for ln in lines[1:]
        )
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").rstrip("\n")
        if header != expect:
            raise InvalidParams("packet file header does not match the parameters")
        body = fh.read()
    width = max(1, ((pp.base.order - 1).bit_length() + 7) // 8)
    per_packet = pp.packet_symbols * width
    if len(body) % per_packet:
        raise LengthMismatch("binary packet body is not a whole number of packets")
    out = []
    for off in range(0, len(body), per_packet):
        chunk = body[off : off + per_packet]
        syms = [
            int.from_bytes(chunk[i : i + width], "big")
            for i in range(0, per_packet, width)
        ]
        out.append(TaggedPacket.from_symbols(pp, syms))
    return tuple(out)
