/**
 * Coefficient-domain augmentation using conjugated operator matrices
 * exported by the wavecoef CLI (`wavecoef export-ops`).
 *
 * An exported operator is a pair (G_conj, H_conj) of n-by-n matrices; the
 * augmented coefficient plane is G_conj @ W @ H_conj, applied to the full
 * subband-arranged plane of each color channel (tensors are unpacked from
 * the 12-channel layout, transformed, and repacked).  The math mirrors the
 * primary component; matrices are never re-derived here.
 */

import * as fs from 'fs';

import { Rng } from './rng';
import { WctFile, readWct, tensorAt } from './wct';

export interface ConjugatedOp {
  index: number;
  name: string;
  hflip: boolean;
  vflip: boolean;
  dx: number;
  dy: number;
  gConj: Float32Array; // n x n, row-major
  hConj: Float32Array;
}

export interface OperatorSet {
  size: number;
  ops: ConjugatedOp[];
  byName: Map<string, ConjugatedOp>;
}

/** Load `ops.wct` + its `.json` manifest into a usable operator set. */
export function loadOperatorSet(wctPath: string, manifestPath?: string): OperatorSet {
  const file = readWct(wctPath);
  if (file.channels !== 2 || file.height !== file.width) {
    throw new Error(
      `operator file must hold (ops, 2, n, n) tensors, got channels=${file.channels}`);
  }
  const manifest = JSON.parse(
    fs.readFileSync(manifestPath ?? wctPath + '.json', 'utf-8'));
  if (manifest.size !== file.height) {
    throw new Error(`manifest size ${manifest.size} disagrees with file size ${file.height}`);
  }
  const n = file.height;
  const ops: ConjugatedOp[] = manifest.ops.map((entry: any) => {
    const t = tensorAt(file, entry.index);
    return {
      index: entry.index,
      name: entry.name,
      hflip: !!entry.hflip,
      vflip: !!entry.vflip,
      dx: entry.dx | 0,
      dy: entry.dy | 0,
      gConj: t.slice(0, n * n),
      hConj: t.slice(n * n),
    };
  });
  return { size: n, ops, byName: new Map(ops.map((op) => [op.name, op])) };
}

/** C = A @ B for row-major n-by-n Float32Arrays. */
export function matmul(a: Float32Array, b: Float32Array, n: number): Float32Array {
  const out = new Float32Array(n * n);
  for (let i = 0; i < n; i++) {
    for (let k = 0; k < n; k++) {
      const aik = a[i * n + k];
      if (aik === 0) continue;
      const bRow = k * n;
      const oRow = i * n;
      for (let j = 0; j < n; j++) {
        out[oRow + j] += aik * b[bRow + j];
      }
    }
  }
  return out;
}

/**
 * Reassemble the full subband-arranged plane of one color from a packed
 * 12-channel tensor: LL | HL over LH | HH, each quadrant h-by-h.
 */
export function unpackPlane(tensor: Float32Array, h: number, color: number): Float32Array {
  const n = 2 * h;
  const plane = new Float32Array(n * n);
  const quadOrigin = [
    [0, 0], [0, h], [h, 0], [h, h], // LL, HL, LH, HH
  ];
  for (let band = 0; band < 4; band++) {
    const ch = color * 4 + band;
    const [r0, c0] = quadOrigin[band];
    for (let r = 0; r < h; r++) {
      for (let c = 0; c < h; c++) {
        plane[(r0 + r) * n + (c0 + c)] = tensor[ch * h * h + r * h + c];
      }
    }
  }
  return plane;
}

/** Inverse of unpackPlane: scatter a plane's quadrants back into the tensor. */
export function packPlane(plane: Float32Array, h: number, color: number,
                          tensor: Float32Array): void {
  const n = 2 * h;
  const quadOrigin = [
    [0, 0], [0, h], [h, 0], [h, h],
  ];
  for (let band = 0; band < 4; band++) {
    const ch = color * 4 + band;
    const [r0, c0] = quadOrigin[band];
    for (let r = 0; r < h; r++) {
      for (let c = 0; c < h; c++) {
        tensor[ch * h * h + r * h + c] = plane[(r0 + r) * n + (c0 + c)];
      }
    }
  }
}

/** Apply a conjugated operator to one packed tensor [12, h, h]; returns a copy. */
export function applyConjugated(tensor: Float32Array, h: number, op: ConjugatedOp): Float32Array {
  const n = 2 * h;
  if (op.gConj.length !== n * n) {
    throw new Error(`operator size ${Math.sqrt(op.gConj.length)} does not match plane ${n}`);
  }
  const out = new Float32Array(tensor.length);
  for (let color = 0; color < 3; color++) {
    const plane = unpackPlane(tensor, h, color);
    const transformed = matmul(op.gConj, matmul(plane, op.hConj, n), n);
    packPlane(transformed, h, color, out);
  }
  return out;
}

/**
 * The broken shortcut a standard pipeline would take: flip every channel of
 * the packed tensor horizontally, as if coefficients were pixels.  Kept as
 * the negative control.
 */
export function naiveChannelFlip(tensor: Float32Array, h: number): Float32Array {
  const out = new Float32Array(tensor.length);
  const channels = tensor.length / (h * h);
  for (let ch = 0; ch < channels; ch++) {
    for (let r = 0; r < h; r++) {
      for (let c = 0; c < h; c++) {
        out[ch * h * h + r * h + c] = tensor[ch * h * h + r * h + (h - 1 - c)];
      }
    }
  }
  return out;
}

export type AugmentationMode = 'none' | 'naive-spatial' | 'conjugated';

export interface SampledOp {
  flip: boolean;
  dx: number;
  dy: number;
}

/** Deterministic per-image operator draws: flip with probability pHflip,
 * shifts uniform in [-maxShift, maxShift]. */
export function samplePolicy(rng: Rng, count: number, pHflip: number,
                             maxShift: number): SampledOp[] {
  const out: SampledOp[] = [];
  for (let i = 0; i < count; i++) {
    const flip = rng.next() < pHflip;
    const dx = maxShift > 0 ? rng.int(-maxShift, maxShift) : 0;
    const dy = maxShift > 0 ? rng.int(-maxShift, maxShift) : 0;
    out.push({ flip, dx, dy });
  }
  return out;
}

/**
 * Compose a sampled draw from the primitive exported operators:
 * conjugation is a homomorphism, so conj(flip then shift) =
 * conj(flip) @ conj(shift) on each side.
 */
export function composeDraw(set: OperatorSet, draw: SampledOp): ConjugatedOp {
  const n = set.size;
  let g: Float32Array | null = null;
  let h: Float32Array | null = null;
  const parts: string[] = [];
  const take = (name: string) => {
    const op = set.byName.get(name);
    if (!op) throw new Error(`operator "${name}" not in the exported set`);
    g = g === null ? op.gConj.slice() : matmul(op.gConj, g, n);
    h = h === null ? op.hConj.slice() : matmul(h, op.hConj, n);
    parts.push(name);
  };
  if (draw.flip) take('hflip');
  if (draw.dx !== 0) take(`hshift(${draw.dx})`);
  if (draw.dy !== 0) take(`vshift(${draw.dy})`);
  if (parts.length === 0) {
    const identity = set.byName.get('identity');
    if (!identity) throw new Error('operator set lacks the identity entry');
    return identity;
  }
  return {
    index: -1, name: parts.join('+'),
    hflip: draw.flip, vflip: false, dx: draw.dx, dy: draw.dy,
    gConj: g!, hConj: h!,
  };
}
