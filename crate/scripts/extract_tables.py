"""Extract numeric tables and parameter listings from the LaTeX source into fixture files."""
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
SRC = Path(sys.argv[1]) if len(sys.argv) > 1 else None
FIX = ROOT / "crates" / "levelone" / "tests" / "fixtures"
DATA = ROOT / "crates" / "levelone" / "data"

PAIR = re.compile(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*&\s*(\d+)")

NUMERIC = {
    "dims_so7.txt": (3522, 3594),
    "dims_so8.txt": (3599, 3681),
    "dims_so9.txt": (3687, 3770),
    "dims_g2.txt": (3776, 3848),
    "s_pairs.txt": (3854, 3926),
    "s_triples.txt": (3934, 4007),
    "s_quadruples.txt": (4014, 4093),
    "o_quadruples.txt": (4099, 4178),
    "o_combined.txt": (4184, 4263),
    "g2_counts.txt": (4267, 4338),
}


def lines(a, b):
    text = SRC.read_text(encoding="utf-8").splitlines()
    return "\n".join(text[a - 1 : b])


def numeric(a, b):
    out = []
    for m in PAIR.finditer(lines(a, b)):
        ws = [int(x) for x in m.group(1).replace(" ", "").split(",")]
        out.append((ws, int(m.group(2))))
    return out


def partitions(a, b):
    body = lines(a, b)
    rows = []
    for chunk in re.split(r"\\hline", body):
        cells = [c.strip() for c in chunk.replace("\\\\", "").split("&")]
        for i in range(0, len(cells) - 1, 2):
            m = re.fullmatch(r"\(\s*([\d,\s]+)\)", cells[i].strip())
            if not m:
                continue
            ws = m.group(1).replace(" ", "")
            names = re.findall(r"\$([^$]*)\$", cells[i + 1].replace("\n", " "))
            rows.append((ws, [" ".join(n.split()) for n in names]))
    return rows


def main():
    if SRC is None:
        sys.exit("usage: extract_tables.py SOURCE.md")
    for name, (a, b) in NUMERIC.items():
        rows = numeric(a, b)
        target = DATA / "s2.dat" if name == "s_pairs.txt" else FIX / name
        with open(target, "w") as f:
            if name == "s_pairs.txt":
                f.write("# w v value\n")
                for ws, v in sorted(rows):
                    f.write(f"{ws[0]} {ws[1]} {v}\n")
            else:
                for ws, v in sorted(rows):
                    f.write(",".join(map(str, ws)) + f" {v}\n")
        print(name, len(rows), file=sys.stderr)
    for name, (a, b) in {"partitions_so7.txt": (4340, 4432), "partitions_so9.txt": (4433, 4500)}.items():
        rows = partitions(a, b)
        with open(FIX / name, "w") as f:
            for ws, names in sorted(rows, key=lambda r: [int(x) for x in r[0].split(",")]):
                f.write(ws + " | " + " ; ".join(names) + "\n")
        print(name, len(rows), file=sys.stderr)
    body = lines(4505, 4606)
    entries = [" ".join(m.split()) for m in re.findall(r"\$\$(.*?)\$\$", body)]
    (FIX / "appendix_c.txt").write_text("\n".join(entries) + "\n")
    print("appendix_c", len(entries), file=sys.stderr)


if __name__ == "__main__":
    main()
