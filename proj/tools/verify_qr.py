#!/usr/bin/env python3
"""Cross-check `cbrn encode` against third-party QR tooling.

Not part of the ctest suite. Needs the `qrcode` package (bit-exact comparison
per forced mask) and/or `opencv-python` (decodes the default 116x116 output).
Missing packages are reported and skipped.

usage: verify_qr.py <path-to-cbrn> <catalog.txt>
"""
import subprocess
import sys
import tempfile
from pathlib import Path


def read_pbm(path):
    tokens = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    assert tokens[0] == "P1"
    w, h = int(tokens[1]), int(tokens[2])
    bits = [int(t) for t in "".join(tokens[3:])]
    return [bits[r * w:(r + 1) * w] for r in range(h)]


def labels(catalog):
    for line in Path(catalog).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line.split(":", 2)[2].strip()


def encode(tool, label, out, *extra):
    subprocess.run([tool, "encode", "--label", label, "--out", out, *extra],
                   check=True, capture_output=True)


def main():
    tool, catalog = sys.argv[1], sys.argv[2]
    failures = 0
    tmp = Path(tempfile.mkdtemp())

    try:
        import qrcode
    except ImportError:
        qrcode = None
        print("skip: qrcode package not installed")
    try:
        import cv2
        import numpy as np
    except ImportError:
        cv2 = None
        print("skip: opencv not installed")

    for label in labels(catalog):
        if qrcode is not None:
            for mask in range(8):
                out = tmp / f"m{mask}.pbm"
                encode(tool, label, str(out), "--scale", "1", "--mask", str(mask))
                ours = read_pbm(out)
                ref = qrcode.QRCode(version=3, error_correction=qrcode.constants.ERROR_CORRECT_L,
                                    border=0, mask_pattern=mask)
                ref.add_data(label.encode("utf-8"), optimize=0)
                ref.make(fit=False)
                theirs = [[1 if v else 0 for v in row] for row in ref.get_matrix()]
                if ours != theirs:
                    failures += 1
                    print(f"MISMATCH qrcode label={label!r} mask={mask}")
        if cv2 is not None:
            out = tmp / "default.pbm"
            encode(tool, label, str(out))
            img = np.array(read_pbm(out), dtype=np.uint8)
            img = np.pad(255 - 255 * img, 16, constant_values=255)
            img = cv2.resize(img, None, fx=4, fy=4, interpolation=cv2.INTER_NEAREST)
            text, _, _ = cv2.QRCodeDetector().detectAndDecode(img)
            if text != label:
                failures += 1
                print(f"DECODE FAIL label={label!r} got={text!r}")
            else:
                print(f"ok {label}")
    print("failures:", failures)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
