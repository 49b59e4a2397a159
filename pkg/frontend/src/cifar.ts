/**
 * Raw CIFAR-10 binary batch reader/writer.
 *
 * Each record is 3073 bytes: one label byte followed by 3072 pixel bytes in
 * planar RGB order (1024 red, 1024 green, 1024 blue), row-major 32x32.
 */

import * as fs from 'fs';

export const CIFAR_SIDE = 32;
export const CIFAR_RECORD_BYTES = 1 + 3 * CIFAR_SIDE * CIFAR_SIDE;

export interface CifarBatch {
  /** Pixel data as [count, 32, 32, 3] uint8, flattened NHWC. */
  pixels: Uint8Array;
  labels: Uint8Array;
  count: number;
}

export class CifarFormatError extends Error {}

export function readCifarBatch(path: string): CifarBatch {
  const buf = fs.readFileSync(path);
  if (buf.length === 0 || buf.length % CIFAR_RECORD_BYTES !== 0) {
    throw new CifarFormatError(
      `file length ${buf.length} is not a multiple of ${CIFAR_RECORD_BYTES}`);
  }
  const count = buf.length / CIFAR_RECORD_BYTES;
  const n = CIFAR_SIDE;
  const labels = new Uint8Array(count);
  const pixels = new Uint8Array(count * n * n * 3);
  for (let i = 0; i < count; i++) {
    const base = i * CIFAR_RECORD_BYTES;
    labels[i] = buf[base];
    // planar RGB -> interleaved HWC
    for (let c = 0; c < 3; c++) {
      const planeBase = base + 1 + c * n * n;
      for (let p = 0; p < n * n; p++) {
        pixels[i * n * n * 3 + p * 3 + c] = buf[planeBase + p];
      }
    }
  }
  return { pixels, labels, count };
}

export function writeCifarBatch(path: string, batch: CifarBatch): void {
  const n = CIFAR_SIDE;
  const buf = Buffer.alloc(batch.count * CIFAR_RECORD_BYTES);
  for (let i = 0; i < batch.count; i++) {
    const base = i * CIFAR_RECORD_BYTES;
    buf[base] = batch.labels[i];
    for (let c = 0; c < 3; c++) {
      const planeBase = base + 1 + c * n * n;
      for (let p = 0; p < n * n; p++) {
        buf[planeBase + p] = batch.pixels[i * n * n * 3 + p * 3 + c];
      }
    }
  }
  fs.writeFileSync(path, buf);
}
