#!/usr/bin/env python3
"""Generate src/unicode_tables.inc from Python's unicodedata.

Emits three sorted tables used by src/unicode.cpp:
  - full canonical decompositions (NFD expansion per codepoint),
  - canonical combining classes (nonzero only),
  - primary composition pairs (pairs that recompose under NFC).

Hangul syllables are handled algorithmically at runtime and are excluded
here. Re-run only when bumping the Unicode version; the output is checked in.
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE = 0xAC00
HANGUL_S_COUNT = 11172


def is_hangul_syllable(cp: int) -> bool:
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def main(out_path: str) -> None:
    decomp_entries = []  # (cp, offset, len) into pool
    pool = []
    ccc_entries = []
    comp_pairs = []

    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF or is_hangul_syllable(cp):
            continue
        ch = chr(cp)

        ccc = unicodedata.combining(ch)
        if ccc:
            ccc_entries.append((cp, ccc))

        nfd = unicodedata.normalize("NFD", ch)
        if nfd != ch:
            decomp_entries.append((cp, len(pool), len(nfd)))
            pool.extend(ord(c) for c in nfd)

        raw = unicodedata.decomposition(ch)
        if raw and not raw.startswith("<"):
            parts = [int(p, 16) for p in raw.split()]
            if len(parts) == 2:
                a, b = parts
                if unicodedata.normalize("NFC", chr(a) + chr(b)) == ch:
                    comp_pairs.append((a, b, cp))

    comp_pairs.sort()

    with open(out_path, "w") as f:
        f.write("// Generated by scripts/gen_unicode_tables.py "
                f"(Unicode {unicodedata.unidata_version}). Do not edit.\n\n")

        f.write(f"static const char32_t kDecompPool[{len(pool)}] = {{\n")
        for i in range(0, len(pool), 10):
            f.write("    " + ", ".join(f"0x{c:05X}" for c in pool[i:i + 10]) + ",\n")
        f.write("};\n\n")

        f.write("struct DecompEntry { char32_t cp; uint32_t offset; uint8_t len; };\n")
        f.write(f"static const DecompEntry kDecomp[{len(decomp_entries)}] = {{\n")
        for cp, off, n in decomp_entries:
            f.write(f"    {{0x{cp:05X}, {off}, {n}}},\n")
        f.write("};\n\n")

        f.write("struct CccEntry { char32_t cp; uint8_t ccc; };\n")
        f.write(f"static const CccEntry kCcc[{len(ccc_entries)}] = {{\n")
        for cp, ccc in ccc_entries:
            f.write(f"    {{0x{cp:05X}, {ccc}}},\n")
        f.write("};\n\n")

        f.write("struct CompEntry { char32_t first; char32_t second; char32_t composed; };\n")
        f.write(f"static const CompEntry kComp[{len(comp_pairs)}] = {{\n")
        for a, b, c in comp_pairs:
            f.write(f"    {{0x{a:05X}, 0x{b:05X}, 0x{c:05X}}},\n")
        f.write("};\n")

    print(f"wrote {out_path}: {len(decomp_entries)} decompositions, "
          f"{len(ccc_entries)} ccc entries, {len(comp_pairs)} composition pairs, "
          f"pool {len(pool)}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")
