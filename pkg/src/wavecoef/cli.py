"""Command-line surface over the pipeline.

Subcommands operate on binary PPM images and WCT coefficient containers:

    dwt        forward transform a PPM into coefficient planes
    idwt       reconstruct a PPM from a WCT file
    pipeline   full forward path: precode, transform, quantize, dequantize, pack
    augment    apply flip/shift operators to packed tensors in the coefficient domain
    export-ops write the conjugated operator matrices consumed by training harnesses
    verify     run the oracle suite and report ok/FAIL per check
    bench      recon / dwt timing reports

Exit codes: 0 success, 1 validation error, 2 I/O or format error.  All
diagnostics go to stderr prefixed with ``error:``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import augment as aug
from . import codec
from .bench import bench_batch_dwt, bench_recon_gain
from .packing import (WctFormatError, pack_subbands, read_wct, unpack_subbands, write_wct)
from .ppm import PpmFormatError, read_ppm, write_ppm
from .wavelet import (build_transform_pair, dwt2d, dwt2d_lifting_reference, dwt_multilevel,
                      idwt2d, idwt_multilevel, plane_to_pyramid, pyramid_to_plane)

CODEC_CONFIG_ENV = "WAVECOEF_CODEC_CONFIG"


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the exit-code contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wavecoef", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dwt", help="forward transform a PPM into a coefficient WCT")
    p.add_argument("--in", dest="in_path", required=True, help="input PPM (P6) image")
    p.add_argument("--levels", type=int, default=1, help="decomposition level count (default 1)")
    p.add_argument("--out", dest="out_path", required=True, help="output WCT file")

    p = sub.add_parser("idwt", help="reconstruct a PPM from a WCT file")
    p.add_argument("--in", dest="in_path", required=True, help="input WCT file")
    p.add_argument("--out", dest="out_path", required=True, help="output PPM image")

    p = sub.add_parser("pipeline", help="precode, transform, quantize, dequantize, pack")
    p.add_argument("--in", dest="in_path", required=True, help="input PPM (P6) image")
    p.add_argument("--ratio", type=float, default=0.0,
                   help="compression parameter r (0 = no quantization)")
    p.add_argument("--out", dest="out_path", required=True, help="output WCT file")

    p = sub.add_parser("augment", help="augment packed tensors in the coefficient domain")
    p.add_argument("--in", dest="in_path", required=True, help="input WCT file (12-channel)")
    p.add_argument("--out", dest="out_path", required=True, help="output WCT file")
    p.add_argument("--hflip", action="store_true", help="horizontal flip")
    p.add_argument("--shift", metavar="DX,DY", help="shift by DX columns and DY rows")
    p.add_argument("--policy", action="store_true",
                   help="sample one operator per tensor instead of a fixed one")
    p.add_argument("--p-hflip", type=float, default=0.5, help="policy flip probability")
    p.add_argument("--max-shift", type=int, default=0, help="policy shift range in pixels")
    p.add_argument("--seed", type=int, default=0, help="policy sampling seed")

    p = sub.add_parser("export-ops",
                       help="write conjugated operator matrices + JSON manifest")
    p.add_argument("--size", type=int, required=True, help="plane side length n")
    p.add_argument("--max-shift", type=int, default=4, help="largest shift to export")
    p.add_argument("--out", dest="out_path", required=True, help="output WCT file")

    p = sub.add_parser("verify", help="run the oracle suite")

    p = sub.add_parser("bench", help="timing reports")
    bench_sub = p.add_subparsers(dest="bench_command", required=True)
    b = bench_sub.add_parser("recon", help="reconstruction gain per image size")
    b.add_argument("--sizes", default="32,64,224", help="comma-separated even sizes")
    b.add_argument("--iterations", type=int, default=50, help="timing samples per median")
    b.add_argument("--csv", help="also write rows as CSV to this path")
    b = bench_sub.add_parser("dwt", help="batch transform throughput")
    b.add_argument("--count", type=int, required=True, help="number of 3-plane images")
    b.add_argument("--size", type=int, default=32, help="plane side length")
    b.add_argument("--csv", help="also write rows as CSV to this path")
    return parser


def _cmd_dwt(args) -> int:
    img = read_ppm(args.in_path)
    if img.width != img.height:
        raise ValueError(f"only square images are supported, got {img.width}x{img.height}")
    if args.levels < 1:
        raise ValueError(f"levels must be >= 1, got {args.levels}")
    ycc = codec.forward_precoding(img)
    grids = [pyramid_to_plane(dwt_multilevel(ch, args.levels))
             for ch in (ycc.y, ycc.cb, ycc.cr)]
    write_wct(args.out_path, [np.stack(grids, axis=0)], flags=args.levels)
    return 0


def _cmd_idwt(args) -> int:
    wct = read_wct(args.in_path)
    if wct.data.shape[0] != 1:
        raise ValueError(f"expected a single-tensor WCT file, got count={wct.data.shape[0]}")
    tensor = wct.data[0].astype(np.float64)
    if tensor.shape[0] == 12:
        from .packing import PackedTensor
        planes = unpack_subbands(PackedTensor(tensor))
        img = codec.decode_tail(planes, build_transform_pair(planes[0].n))
    elif tensor.shape[0] == 3:
        levels = wct.flags or 1
        chans = [idwt_multilevel(plane_to_pyramid(grid, levels)) for grid in tensor]
        img = codec.inverse_precoding(
            codec.YcbcrPlanes(y=chans[0], cb=chans[1], cr=chans[2]))
    else:
        raise ValueError(f"cannot reconstruct from a {tensor.shape[0]}-channel file")
    write_ppm(args.out_path, img)
    return 0


def _cmd_pipeline(args) -> int:
    img = read_ppm(args.in_path)
    if img.width != img.height:
        raise ValueError(f"only square images are supported, got {img.width}x{img.height}")
    pair = build_transform_pair(img.width)
    planes = codec.compress_planes(img, args.ratio, pair)
    write_wct(args.out_path, [pack_subbands(*planes)], flags=1)
    return 0


def _parse_shift(text: str) -> tuple[int, int]:
    try:
        dx, dy = (int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"--shift expects DX,DY integers, got {text!r}") from exc
    return dx, dy


def _cmd_augment(args) -> int:
    from .packing import PackedTensor

    wct = read_wct(args.in_path)
    if wct.data.shape[1] != 12:
        raise ValueError(f"augment expects 12-channel tensors, got {wct.data.shape[1]}")
    n = wct.data.shape[2] * 2
    pair = build_transform_pair(n)
    count = wct.data.shape[0]
    if args.policy:
        policy = aug.AugPolicy(seed=args.seed, p_hflip=args.p_hflip,
                               max_shift=args.max_shift)
        ops = aug.sample_policy(policy, count, pair)
    else:
        dx, dy = _parse_shift(args.shift) if args.shift else (0, 0)
        op = aug.make_operator(pair, hflip=args.hflip, dx=dx, dy=dy)
        ops = [op] * count
    out = np.empty_like(wct.data)
    for i in range(count):
        planes = unpack_subbands(PackedTensor(wct.data[i].astype(np.float64)))
        augmented = [aug.apply_augmentation(p, ops[i]) for p in planes]
        out[i] = pack_subbands(*augmented).data
    write_wct(args.out_path, out, flags=wct.flags)
    return 0


def _cmd_export_ops(args) -> int:
    if args.max_shift < 0:
        raise ValueError(f"--max-shift must be >= 0, got {args.max_shift}")
    n = args.size
    pair = build_transform_pair(n)
    entries = [("identity", dict())]
    entries.append(("hflip", dict(hflip=True)))
    entries.append(("vflip", dict(vflip=True)))
    for s in range(1, args.max_shift + 1):
        for sign in (1, -1):
            entries.append((f"hshift({sign * s})", dict(dx=sign * s)))
            entries.append((f"vshift({sign * s})", dict(dy=sign * s)))
    tensors = np.empty((len(entries), 2, n, n), dtype=np.float32)
    manifest = {"size": n, "channel_order": ["G_conj", "H_conj"], "ops": []}
    for i, (name, kwargs) in enumerate(entries):
        op = aug.make_operator(pair, **kwargs)
        tensors[i, 0] = op.G_conj
        tensors[i, 1] = op.H_conj
        manifest["ops"].append({"index": i, "name": name,
                                "hflip": bool(kwargs.get("hflip", False)),
                                "vflip": bool(kwargs.get("vflip", False)),
                                "dx": int(kwargs.get("dx", 0)),
                                "dy": int(kwargs.get("dy", 0))})
    write_wct(args.out_path, tensors, flags=0)
    with open(str(args.out_path) + ".json", "w") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    return 0


def _verification_checks():
    rng = np.random.default_rng(7)

    def check_equivalence():
        pair = build_transform_pair(32)
        x = rng.uniform(-128, 128, size=(32, 32))
        diff = np.abs(dwt2d(x, pair).data - dwt2d_lifting_reference(x).data).max()
        return diff < 1e-9, f"max diff {diff:.3e}"

    def check_reconstruction():
        worst = 0.0
        for n in (8, 16, 32, 64):
            pair = build_transform_pair(n)
            x = rng.uniform(0, 255, size=(n, n))
            worst = max(worst, np.abs(idwt2d(dwt2d(x, pair), pair) - x).max())
        return worst < 1e-10, f"max err {worst:.3e}"

    def check_conjugation():
        pair = build_transform_pair(32)
        x = rng.uniform(0, 255, size=(32, 32))
        w = dwt2d(x, pair)
        worst = 0.0
        for kwargs in (dict(hflip=True), dict(vflip=True), dict(dx=2), dict(dy=-3)):
            op = aug.make_operator(pair, **kwargs)
            rec = idwt2d(aug.apply_augmentation(w, op), pair)
            worst = max(worst, np.abs(rec - aug.apply_spatial(x, op)).max())
        return worst < 1e-6, f"max err {worst:.3e}"

    def check_quantizer():
        y = np.arange(-50.0, 50.0, 0.25)
        for step in (1.0, 2.0):
            q = codec.quantize_values(y, step)
            if not np.array_equal(q == 0, np.abs(y) < step):
                return False, f"dead zone violated at step {step}"
            err = np.abs(codec.dequantize_values(q, step) - y).max()
            if err > step:
                return False, f"reconstruction bound violated: {err:.3f} > {step}"
        return True, "dead zone + bound hold"

    def check_precoding():
        img = codec.RgbImage(rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8))
        back = codec.inverse_precoding(codec.forward_precoding(img))
        return np.array_equal(back.samples, img.samples), "round trip"

    return [("matrix/lifting equivalence", check_equivalence),
            ("perfect reconstruction", check_reconstruction),
            ("conjugation property", check_conjugation),
            ("dead-zone quantizer", check_quantizer),
            ("precoding round trip", check_precoding)]


def _cmd_verify(args) -> int:
    failures = 0
    for name, check in _verification_checks():
        ok, detail = check()
        if ok:
            print(f"ok: {name} ({detail})")
        else:
            failures += 1
            print(f"FAIL: {name} ({detail})")
    return 0 if failures == 0 else 1


def _cmd_bench(args) -> int:
    if args.bench_command == "recon":
        sizes = tuple(int(s) for s in args.sizes.split(","))
        report = bench_recon_gain(sizes=sizes, iterations=args.iterations)
    else:
        report = bench_batch_dwt(count=args.count, side=args.size)
    print(f"# {report.kind} | {report.environment} | {report.timestamp}")
    for record in report.records():
        print(record)
    if args.csv:
        report.to_csv(args.csv)
    return 0


_COMMANDS = {
    "dwt": _cmd_dwt,
    "idwt": _cmd_idwt,
    "pipeline": _cmd_pipeline,
    "augment": _cmd_augment,
    "export-ops": _cmd_export_ops,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
}


def run(argv) -> int:
    """Parse and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (_UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PpmFormatError, WctFormatError, codec.CodecUnavailableError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
