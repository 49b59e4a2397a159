import { describe, expect, it } from 'vitest';

import { TABLE_REFERENCE, TABLE_SPECS, buildModel, countConvLayers,
         expectedConvLayers, validateSpec } from '../src/model';

describe('published model family structure', () => {
  for (const name of ['a', 'b', 'c', 'd', 'e', 'f']) {
    it(`model ${name} matches its declared conv count and parameter total`, () => {
      const spec = TABLE_SPECS[name];
      const ref = TABLE_REFERENCE[name];
      expect(expectedConvLayers(spec)).toBe(ref.convLayers);
      const model = buildModel(spec);
      expect(countConvLayers(model)).toBe(ref.convLayers);
      const params = model.countParams();
      const declared = ref.paramsM * 1e6;
      expect(Math.abs(params - declared) / declared).toBeLessThan(0.05);
      model.dispose();
    });
  }

  it('coefficient-domain model d consumes 16x16x12 tensors', () => {
    const model = buildModel(TABLE_SPECS.d);
    expect(model.inputs[0].shape.slice(1)).toEqual([16, 16, 12]);
    model.dispose();
  });

  it('RGB model a consumes 32x32x3 images', () => {
    const model = buildModel(TABLE_SPECS.a);
    expect(model.inputs[0].shape.slice(1)).toEqual([32, 32, 3]);
    model.dispose();
  });
});

describe('spec validation', () => {
  it('rejects a pool kernel that disagrees with the input side', () => {
    expect(() => validateSpec({ ...TABLE_SPECS.a, k: 4 })).toThrow(/pool kernel/);
  });

  it('rejects input sides not divisible by four', () => {
    expect(() => validateSpec({ ...TABLE_SPECS.a, w: 30 })).toThrow(/divisible/);
  });

  it('rejects stack counts other than three', () => {
    expect(() => validateSpec({ ...TABLE_SPECS.a, ns: 2 })).toThrow(/stacks/);
  });

  it('rejects zero blocks per stack', () => {
    expect(() => validateSpec({ ...TABLE_SPECS.a, nb: 0 })).toThrow(/blocks/);
  });
});

describe('weight init seeding', () => {
  it('same seed gives identical initial weights', () => {
    const spec = { ...TABLE_SPECS.f, w: 8, k: 2, nf: [4, 4, 6, 8] as [number, number, number, number] };
    const m1 = buildModel(spec, 11);
    const m2 = buildModel(spec, 11);
    const w1 = m1.getWeights().map((t) => t.dataSync());
    const w2 = m2.getWeights().map((t) => t.dataSync());
    for (let i = 0; i < w1.length; i++) {
      expect(Array.from(w1[i])).toEqual(Array.from(w2[i]));
    }
    m1.dispose();
    m2.dispose();
  });
});
