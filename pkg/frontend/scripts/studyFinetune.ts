/**
 * Fine-tuning study across compression levels: train a base model on
 * uncompressed (r=0) tensors, then for each compressed variant compare a
 * 25%-budget fine-tune of the base against a 25%-budget from-scratch run.
 *
 * Usage:  node dist/scripts/studyFinetune.js study.json
 *
 * study.json:
 * {
 *   "base":   { "train": "r0.wct", "trainLabels": "r0.lbl" },
 *   "levels": [ { "r": 5,  "train": "r5.wct",  "trainLabels": "r5.lbl",
 *                 "test": "r5t.wct", "testLabels": "r5t.lbl" }, ... ],
 *   "model": "d", "epochs": 10, "seeds": [0, 1, 2],
 *   "checkpoint": "base_weights.bin"
 * }
 */

import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';

import { disposeDataset, loadWctDataset } from '../src/data';
import { TABLE_SPECS } from '../src/model';
import { DEFAULT_CONFIG, evaluate, finetune, saveWeights, train } from '../src/train';

async function main(): Promise<void> {
  const configPath = process.argv[2];
  if (!configPath) {
    console.error('usage: studyFinetune <study.json>');
    process.exit(1);
  }
  const study = JSON.parse(fs.readFileSync(configPath, 'utf-8'));
  const spec = TABLE_SPECS[study.model ?? 'd'];
  const epochs: number = study.epochs ?? 10;
  const seeds: number[] = study.seeds ?? [0, 1, 2];
  const baseSet = loadWctDataset(study.base.train, study.base.trainLabels);

  for (const seed of seeds) {
    const base = await train(spec, baseSet, { ...DEFAULT_CONFIG, seed, epochs });
    const checkpoint = study.checkpoint ??
      path.join(os.tmpdir(), `base_seed${seed}.bin`);
    saveWeights(base.model, checkpoint);
    base.model.dispose();

    for (const level of study.levels) {
      const trainSet = loadWctDataset(level.train, level.trainLabels);
      const testSet = loadWctDataset(level.test, level.testLabels);
      const { finetuned, scratch } = await finetune(
        spec, checkpoint, trainSet, { ...DEFAULT_CONFIG, seed, epochs });
      const ft = evaluate(finetuned.model, testSet).accuracy;
      const sc = evaluate(scratch.model, testSet).accuracy;
      console.log(
        `seed=${seed} r=${level.r}: finetuned ${(100 * ft).toFixed(2)}% vs ` +
        `scratch ${(100 * sc).toFixed(2)}% at 25% budget ` +
        `${ft >= sc ? '(finetune ahead)' : '(scratch ahead)'}`);
      finetuned.model.dispose();
      scratch.model.dispose();
      disposeDataset(trainSet);
      disposeDataset(testSet);
    }
  }
  disposeDataset(baseSet);
}

main();
