import * as path from 'path';

import { describe, expect, it } from 'vitest';

import { applyConjugated, composeDraw, loadOperatorSet, matmul,
         naiveChannelFlip, samplePolicy, unpackPlane } from '../src/augment';
import { Rng } from '../src/rng';
import { readWct, tensorAt } from '../src/wct';

const FIXTURES = path.join(__dirname, 'fixtures');

const opSet = loadOperatorSet(path.join(FIXTURES, 'ops.wct'));
const tensors = readWct(path.join(FIXTURES, 'tensors.wct'));
const flipped = readWct(path.join(FIXTURES, 'tensors_hflip.wct'));
const H = tensors.height; // 16: packed tensors are half the 32-pixel planes

function maxAbsDiff(a: Float32Array, b: Float32Array): number {
  let worst = 0;
  for (let i = 0; i < a.length; i++) {
    worst = Math.max(worst, Math.abs(a[i] - b[i]));
  }
  return worst;
}

describe('operator set', () => {
  it('loads every exported operator with both matrices', () => {
    expect(opSet.size).toBe(2 * H);
    // identity + hflip + vflip + shifts {±1, ±2} on both axes
    expect(opSet.ops.length).toBe(11);
    expect(opSet.byName.has('identity')).toBe(true);
    expect(opSet.byName.has('hshift(-2)')).toBe(true);
  });

  it('identity operator leaves tensors untouched (up to float32 matmul)', () => {
    const t = tensorAt(tensors, 0);
    const out = applyConjugated(t, H, opSet.byName.get('identity')!);
    expect(maxAbsDiff(out, t)).toBeLessThan(1e-3);
  });
});

describe('conjugated flip against the primary implementation', () => {
  it('matches the CLI-augmented batch on every tensor', () => {
    const op = opSet.byName.get('hflip')!;
    for (let i = 0; i < tensors.count; i++) {
      const ours = applyConjugated(tensorAt(tensors, i), H, op);
      const theirs = tensorAt(flipped, i);
      // float32 matrices + float32 accumulation vs float64 reference
      expect(maxAbsDiff(ours, theirs)).toBeLessThan(0.05);
    }
  });

  it('flip twice returns to the original', () => {
    const op = opSet.byName.get('hflip')!;
    const t = tensorAt(tensors, 3);
    const twice = applyConjugated(applyConjugated(t, H, op), H, op);
    expect(maxAbsDiff(twice, t)).toBeLessThan(1e-2);
  });

  it('naive channel flip is NOT the conjugated flip', () => {
    const op = opSet.byName.get('hflip')!;
    const t = tensorAt(tensors, 0);
    const naive = naiveChannelFlip(t, H);
    const conjugated = applyConjugated(t, H, op);
    expect(maxAbsDiff(naive, conjugated)).toBeGreaterThan(1.0);
  });
});

describe('operator composition', () => {
  it('composed draw equals sequential application', () => {
    const t = tensorAt(tensors, 1);
    const sequential = applyConjugated(
      applyConjugated(t, H, opSet.byName.get('hflip')!),
      H, opSet.byName.get('hshift(2)')!);
    const composed = applyConjugated(
      t, H, composeDraw(opSet, { flip: true, dx: 2, dy: 0 }));
    expect(maxAbsDiff(sequential, composed)).toBeLessThan(1e-2);
  });

  it('identity draw reuses the exported identity', () => {
    const op = composeDraw(opSet, { flip: false, dx: 0, dy: 0 });
    expect(op.name).toBe('identity');
  });
});

describe('policy sampling', () => {
  it('is deterministic in the seed', () => {
    const a = samplePolicy(new Rng(42), 50, 0.5, 2);
    const b = samplePolicy(new Rng(42), 50, 0.5, 2);
    expect(a).toEqual(b);
  });

  it('forces flips at p = 1 and none at p = 0', () => {
    expect(samplePolicy(new Rng(1), 40, 1.0, 0).every((d) => d.flip)).toBe(true);
    expect(samplePolicy(new Rng(1), 40, 0.0, 0).every((d) => !d.flip)).toBe(true);
  });

  it('keeps shifts inside the configured range', () => {
    const draws = samplePolicy(new Rng(9), 200, 0.5, 2);
    for (const d of draws) {
      expect(Math.abs(d.dx)).toBeLessThanOrEqual(2);
      expect(Math.abs(d.dy)).toBeLessThanOrEqual(2);
    }
  });
});

describe('plane packing helpers', () => {
  it('unpackPlane places quadrants where the producer put them', () => {
    const t = tensorAt(tensors, 0);
    const plane = unpackPlane(t, H, 0);
    const n = 2 * H;
    // LL quadrant top-left: channel 0 value (1,2) lands at plane (1,2)
    expect(plane[1 * n + 2]).toBe(t[1 * H + 2]);
    // HL quadrant top-right: channel 1 value (0,0) lands at plane (0,H)
    expect(plane[0 * n + H]).toBe(t[1 * H * H]);
    // LH bottom-left: channel 2 (0,0) -> plane (H,0)
    expect(plane[H * n]).toBe(t[2 * H * H]);
    // HH bottom-right: channel 3 (0,0) -> plane (H,H)
    expect(plane[H * n + H]).toBe(t[3 * H * H]);
  });

  it('matmul agrees with a hand-checked product', () => {
    const a = new Float32Array([1, 2, 3, 4]);
    const b = new Float32Array([5, 6, 7, 8]);
    expect(Array.from(matmul(a, b, 2))).toEqual([19, 22, 43, 50]);
  });
});
