"""Timing studies: what skipping reconstruction buys, and what the matrix
formulation buys over per-sample lifting loops.

Run:  python demos/05_benchmarks.py        (~20 s)
"""

from wavecoef import bench_batch_dwt, bench_recon_gain

print("=== reconstruction gain ===")
print("decode tail = dequantize + inverse transform + color map + offset;")
print("a coefficient-domain consumer pays only the dequantize part.\n")
report = bench_recon_gain(sizes=(32, 64, 224), iterations=40)
for record in report.records():
    print(record)
print("\n(the skipped share grows with image size)")

print("\n=== batch transform throughput ===")
print("2,000 RGB images of 32x32, one precomputed matrix vs lifting loops:\n")
report = bench_batch_dwt(count=2000, side=32)
for record in report.records():
    print(record)
row = report.rows[0]
print(f"\nmatrix path: {row['matrix_ms']:.0f} ms for the whole batch; "
      f"loop lifting would need ~{row['lifting_est_ms'] / 1000:.0f} s "
      f"({row['speedup']:.0f}x slower)")
