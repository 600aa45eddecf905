#!/usr/bin/env python3
"""Convert the public Cora citation dataset into binaryne input files.

Produces cora.edges, cora.attrs and cora.labels under --out from the raw
LINQS distribution (cora.cites + cora.content). The raw files can be given
via --source (a directory or a cora.tgz archive); without --source the
script downloads the archive from the LINQS site.

Usage:
    python3 scripts/prepare_cora.py --out data/cora
    python3 scripts/prepare_cora.py --source /path/to/cora --out data/cora
"""

import argparse
import sys
import tarfile
import tempfile
import urllib.request
from pathlib import Path

LINQS_URL = "https://linqs-data.soe.ucsc.edu/public/lbc/cora.tgz"


def locate_raw(source: Path) -> tuple[Path, Path]:
    """Find cora.cites and cora.content under a directory."""
    cites = list(source.rglob("cora.cites"))
    content = list(source.rglob("cora.content"))
    if not cites or not content:
        sys.exit(f"error: cora.cites / cora.content not found under {source}")
    return cites[0], content[0]


def fetch(workdir: Path) -> Path:
    archive = workdir / "cora.tgz"
    print(f"downloading {LINQS_URL} ...")
    urllib.request.urlretrieve(LINQS_URL, archive)
    with tarfile.open(archive) as tar:
        tar.extractall(workdir)
    return workdir


def convert(cites: Path, content: Path, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)

    nodes: list[str] = []
    attr_lines: list[str] = []
    label_lines: list[str] = []
    with content.open() as f:
        for line in f:
            fields = line.rstrip("\n").split("\t")
            if len(fields) < 3:
                continue
            node, values, label = fields[0], fields[1:-1], fields[-1]
            nodes.append(node)
            for j, v in enumerate(values):
                if v != "0":
                    attr_lines.append(f"{node} w{j} {v}\n")
            label_lines.append(f"{node} {label}\n")

    known = set(nodes)
    edge_lines = []
    with cites.open() as f:
        for line in f:
            fields = line.split()
            if len(fields) != 2:
                continue
            cited, citing = fields
            if cited not in known or citing not in known:
                continue
            edge_lines.append(f"{citing} {cited}\n")

    covered = {field for line in edge_lines for field in line.split()}
    missing = [n for n in nodes if n not in covered]
    if missing:
        # keep isolated papers in the graph via explicit self-loop lines,
        # which the loader drops while still interning the id
        edge_lines.extend(f"{n} {n}\n" for n in missing)
        print(f"note: {len(missing)} papers have no citations; kept as isolated nodes")

    (out / "cora.edges").write_text("".join(edge_lines))
    (out / "cora.attrs").write_text("".join(attr_lines))
    (out / "cora.labels").write_text("".join(label_lines))
    print(f"wrote {len(nodes)} nodes, {len(edge_lines)} edge lines, "
          f"{len(attr_lines)} attribute triplets to {out}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--source", type=Path,
                        help="directory or cora.tgz with the raw LINQS files")
    parser.add_argument("--out", type=Path, default=Path("data/cora"))
    args = parser.parse_args()

    if args.source and args.source.suffix in {".tgz", ".gz"}:
        with tempfile.TemporaryDirectory() as tmp:
            with tarfile.open(args.source) as tar:
                tar.extractall(tmp)
            cites, content = locate_raw(Path(tmp))
            convert(cites, content, args.out)
    elif args.source:
        cites, content = locate_raw(args.source)
        convert(cites, content, args.out)
    else:
        with tempfile.TemporaryDirectory() as tmp:
            workdir = fetch(Path(tmp))
            cites, content = locate_raw(workdir)
            convert(cites, content, args.out)


if __name__ == "__main__":
    main()
