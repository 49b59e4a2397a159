/**
 * Training-throughput comparison at paired depths: the coefficient-domain
 * models (half input width, more filters) against their RGB counterparts.
 * Pairs with equal conv counts: (b, d), (c, e).
 *
 * Usage:  node dist/scripts/studyThroughput.js [imageCount] [epochs]
 *
 * Uses synthetic data of the right shapes; throughput does not depend on
 * image content.  Rates on the pure-JS backend are orders of magnitude
 * below native ones; only the DWT/RGB ratio is meaningful here.
 */

import * as tf from '@tensorflow/tfjs';

import { Dataset } from '../src/data';
import { ModelSpec, TABLE_SPECS } from '../src/model';
import { DEFAULT_CONFIG, train } from '../src/train';

function synthetic(spec: ModelSpec, count: number): Dataset {
  return {
    x: tf.randomNormal([count, spec.w, spec.w, spec.nc]) as tf.Tensor4D,
    y: tf.tensor1d(Float32Array.from(
      { length: count }, (_, i) => i % spec.classes)),
    count,
  };
}

async function rate(spec: ModelSpec, count: number, epochs: number): Promise<number> {
  const ds = synthetic(spec, count);
  const result = await train(spec, ds, {
    ...DEFAULT_CONFIG, seed: 0, epochs, batchSize: 64,
  });
  ds.x.dispose();
  ds.y.dispose();
  result.model.dispose();
  // first epoch pays one-time graph building; use the last epoch's rate
  return result.records[result.records.length - 1].imagesPerSecond;
}

async function main(): Promise<void> {
  const count = parseInt(process.argv[2] ?? '256', 10);
  const epochs = parseInt(process.argv[3] ?? '2', 10);
  console.log(`measuring training rate on ${count} images x ${epochs} epochs per model\n`);
  for (const [rgbName, dwtName] of [['b', 'd'], ['c', 'e']] as const) {
    const rgb = await rate(TABLE_SPECS[rgbName], count, epochs);
    const dwt = await rate(TABLE_SPECS[dwtName], count, epochs);
    const ratio = dwt / rgb;
    console.log(
      `pair (${rgbName} RGB, ${dwtName} DWT): ${rgb.toFixed(1)} vs ` +
      `${dwt.toFixed(1)} images/s -> ratio ${ratio.toFixed(2)} ` +
      `${ratio >= 1 ? '(DWT at least as fast: PASS)' : '(RGB faster)'}`);
  }
}

main();
