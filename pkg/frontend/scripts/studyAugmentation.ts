/**
 * Desk-scale augmentation study: conjugated vs naive-spatial augmentation on
 * coefficient tensors, several seeds, mean test accuracy per mode.
 *
 * Usage:  node dist/scripts/studyAugmentation.js study.json
 *
 * study.json:
 * {
 *   "train": "train.wct", "trainLabels": "train.lbl",
 *   "test": "test.wct",   "testLabels": "test.lbl",
 *   "ops": "ops.wct",
 *   "model": "d", "epochs": 10, "seeds": [0, 1, 2],
 *   "metrics": "augmentation_metrics.jsonl"
 * }
 *
 * Expect hours on the pure-JS backend at the 10k-image scale; reduce the
 * train set or epochs for a shorter directional read.
 */

import * as fs from 'fs';

import { loadOperatorSet } from '../src/augment';
import { disposeDataset, loadWctDataset } from '../src/data';
import { TABLE_SPECS } from '../src/model';
import { DEFAULT_CONFIG, evaluate, train, writeMetrics } from '../src/train';

async function main(): Promise<void> {
  const configPath = process.argv[2];
  if (!configPath) {
    console.error('usage: studyAugmentation <study.json>');
    process.exit(1);
  }
  const study = JSON.parse(fs.readFileSync(configPath, 'utf-8'));
  const spec = TABLE_SPECS[study.model ?? 'd'];
  const trainSet = loadWctDataset(study.train, study.trainLabels);
  const testSet = loadWctDataset(study.test, study.testLabels);
  const operatorSet = loadOperatorSet(study.ops);
  const seeds: number[] = study.seeds ?? [0, 1, 2];
  const epochs: number = study.epochs ?? 10;

  const means: Record<string, number> = {};
  for (const mode of ['conjugated', 'naive-spatial'] as const) {
    const accuracies: number[] = [];
    for (const seed of seeds) {
      const result = await train(spec, trainSet, {
        ...DEFAULT_CONFIG, seed, epochs, augmentation: mode, operatorSet,
      });
      const acc = evaluate(result.model, testSet).accuracy;
      accuracies.push(acc);
      console.log(`${mode} seed=${seed}: test accuracy ${(100 * acc).toFixed(2)}%`);
      if (study.metrics) writeMetrics(study.metrics, `${mode}/seed${seed}`, result.records);
      result.model.dispose();
    }
    means[mode] = accuracies.reduce((a, b) => a + b, 0) / accuracies.length;
  }
  const gap = 100 * (means['conjugated'] - means['naive-spatial']);
  console.log(`\nmean conjugated: ${(100 * means['conjugated']).toFixed(2)}%`);
  console.log(`mean naive:      ${(100 * means['naive-spatial']).toFixed(2)}%`);
  console.log(`advantage:       ${gap.toFixed(2)} points ${gap >= 1 ? '(PASS >= 1)' : '(below 1)'}`);
  disposeDataset(trainSet);
  disposeDataset(testSet);
}

main();
