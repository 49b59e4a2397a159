/**
 * Training, evaluation and fine-tuning over Dataset tensors.
 *
 * The protocol follows the published recipe scaled to desk size: Adam at an
 * initial rate of 0.001, decayed by 1/10 at fixed epoch milestones
 * (80/120/160 over 200 epochs at full scale; the same fractions of
 * whatever epoch budget is configured here).  Metrics are written as
 * line-delimited JSON records.
 */

import * as fs from 'fs';

import * as tf from '@tensorflow/tfjs';

import { AugmentationMode, OperatorSet, applyConjugated, composeDraw,
         naiveChannelFlip, samplePolicy } from './augment';
import { Dataset } from './data';
import { ModelSpec, buildModel } from './model';
import { Rng } from './rng';

export interface TrainConfig {
  epochs: number;
  batchSize: number;
  learningRate: number;
  /** Fractions of the epoch budget at which the rate drops by 1/10. */
  milestones: number[];
  seed: number;
  augmentation: AugmentationMode;
  /** Required when augmentation === 'conjugated': the exported operator set. */
  operatorSet?: OperatorSet;
  pHflip?: number;
  maxShift?: number;
}

export const DEFAULT_CONFIG: Omit<TrainConfig, 'seed'> = {
  epochs: 10,
  batchSize: 64,
  learningRate: 0.001,
  milestones: [0.4, 0.6, 0.8],
  augmentation: 'none',
  pHflip: 0.5,
  maxShift: 2,
};

export interface EpochRecord {
  epoch: number;
  loss: number;
  accuracy: number;
  imagesPerSecond: number;
  learningRate: number;
}

export interface TrainResult {
  records: EpochRecord[];
  model: tf.LayersModel;
}

/** Learning rate at a given epoch under the 1/10-decay milestone schedule. */
export function scheduledRate(base: number, epoch: number, epochs: number,
                              milestones: number[]): number {
  let rate = base;
  for (const m of milestones) {
    if (epoch >= Math.floor(m * epochs)) rate /= 10;
  }
  return rate;
}

function augmentEpoch(x: tf.Tensor4D, config: TrainConfig, rng: Rng): tf.Tensor4D {
  const [count, h, w, channels] = x.shape;
  if (config.augmentation === 'none') {
    return x.clone();
  }
  if (config.augmentation === 'naive-spatial') {
    // flip each sample's channels like pixels, with probability pHflip
    const data = x.dataSync() as Float32Array;
    const out = new Float32Array(data.length);
    const sample = h * w * channels;
    for (let i = 0; i < count; i++) {
      const src = data.subarray(i * sample, (i + 1) * sample);
      if (rng.next() < (config.pHflip ?? 0.5)) {
        // NHWC horizontal flip
        for (let r = 0; r < h; r++) {
          for (let c = 0; c < w; c++) {
            for (let ch = 0; ch < channels; ch++) {
              out[i * sample + (r * w + c) * channels + ch] =
                src[(r * w + (w - 1 - c)) * channels + ch];
            }
          }
        }
      } else {
        out.set(src, i * sample);
      }
    }
    return tf.tensor4d(out, [count, h, w, channels]);
  }
  // conjugated: unpack + G W H + repack per sample, in the channel-major layout
  const set = config.operatorSet;
  if (!set) throw new Error('conjugated augmentation needs an operator set');
  if (channels !== 12) throw new Error('conjugated augmentation expects 12-channel tensors');
  const draws = samplePolicy(rng, count, config.pHflip ?? 0.5, config.maxShift ?? 0);
  const data = x.dataSync() as Float32Array;
  const out = new Float32Array(data.length);
  const sample = h * w * channels;
  const chw = new Float32Array(sample);
  for (let i = 0; i < count; i++) {
    // NHWC -> CHW
    for (let p = 0; p < h * w; p++) {
      for (let ch = 0; ch < channels; ch++) {
        chw[ch * h * w + p] = data[i * sample + p * channels + ch];
      }
    }
    const op = composeDraw(set, draws[i]);
    const augmented = op.name === 'identity' ? chw : applyConjugated(chw, h, op);
    for (let p = 0; p < h * w; p++) {
      for (let ch = 0; ch < channels; ch++) {
        out[i * sample + p * channels + ch] = augmented[ch * h * w + p];
      }
    }
  }
  return tf.tensor4d(out, [count, h, w, channels]);
}

export async function train(spec: ModelSpec, dataset: Dataset,
                            config: TrainConfig): Promise<TrainResult> {
  const model = buildModel(spec, config.seed);
  return trainModel(model, dataset, config);
}

/** Train an existing model in place (used by both train and finetune). */
export async function trainModel(model: tf.LayersModel, dataset: Dataset,
                                 config: TrainConfig): Promise<TrainResult> {
  const [, h, w, channels] = dataset.x.shape;
  const expected = model.inputs[0].shape;
  if (expected[1] !== h || expected[2] !== w || expected[3] !== channels) {
    throw new Error(
      `data is ${h}x${w}x${channels} but the model expects ` +
      `${expected[1]}x${expected[2]}x${expected[3]}`);
  }
  const optimizer = tf.train.adam(config.learningRate);
  model.compile({
    optimizer,
    loss: 'sparseCategoricalCrossentropy',
    metrics: ['accuracy'],
  });
  const rng = new Rng(config.seed ^ 0x9e3779b9);
  const records: EpochRecord[] = [];
  for (let epoch = 0; epoch < config.epochs; epoch++) {
    const rate = scheduledRate(config.learningRate, epoch, config.epochs,
                               config.milestones);
    (optimizer as any).learningRate = rate;
    const xEpoch = augmentEpoch(dataset.x, config, rng);
    const started = Date.now();
    const history = await model.fit(xEpoch, dataset.y, {
      epochs: 1,
      batchSize: config.batchSize,
      shuffle: false,  // deterministic order; augmentation supplies variety
      verbose: 0,
    });
    const seconds = (Date.now() - started) / 1000;
    xEpoch.dispose();
    records.push({
      epoch,
      loss: history.history.loss[0] as number,
      accuracy: (history.history.acc?.[0] ?? history.history.accuracy?.[0]) as number,
      imagesPerSecond: dataset.count / seconds,
      learningRate: rate,
    });
  }
  return { records, model };
}

export interface EvalResult {
  accuracy: number;
  top5Accuracy?: number;
  imagesPerSecond: number;
}

export function evaluate(model: tf.LayersModel, dataset: Dataset,
                         batchSize = 256): EvalResult {
  const classes = model.outputs[0].shape[1] as number;
  const started = Date.now();
  const probs = model.predict(dataset.x, { batchSize }) as tf.Tensor2D;
  const seconds = Math.max((Date.now() - started) / 1000, 1e-9);
  const labels = dataset.y.dataSync();
  const p = probs.dataSync() as Float32Array;
  probs.dispose();
  let correct = 0;
  let top5 = 0;
  for (let i = 0; i < dataset.count; i++) {
    const row = p.subarray(i * classes, (i + 1) * classes);
    const truth = labels[i];
    let best = 0;
    let better = 0; // classes scoring above the true one
    for (let c = 0; c < classes; c++) {
      if (row[c] > row[best]) best = c;
      if (row[c] > row[truth]) better++;
    }
    if (best === truth) correct++;
    if (better < 5) top5++;
  }
  const result: EvalResult = {
    accuracy: correct / dataset.count,
    imagesPerSecond: dataset.count / seconds,
  };
  if (classes > 10) result.top5Accuracy = top5 / dataset.count;
  return result;
}

export interface FinetuneResult {
  finetuned: TrainResult;
  scratch: TrainResult;
}

/**
 * Fine-tune from base weights for 25% of the base epoch budget, next to a
 * from-scratch control trained for the same (reduced) budget.
 */
export async function finetune(spec: ModelSpec, baseWeightsPath: string,
                               dataset: Dataset, config: TrainConfig,
                               fraction = 0.25): Promise<FinetuneResult> {
  const reduced: TrainConfig = {
    ...config,
    epochs: Math.max(1, Math.round(config.epochs * fraction)),
  };
  const warm = buildModel(spec, reduced.seed);
  loadWeights(warm, baseWeightsPath);
  const finetuned = await trainModel(warm, dataset, reduced);
  const scratch = await train(spec, dataset, reduced);
  return { finetuned, scratch };
}

/** Minimal weight checkpoint: JSON shapes + raw float32 payload. */
export function saveWeights(model: tf.LayersModel, path: string): void {
  const weights = model.getWeights();
  const manifest: { shape: number[]; size: number }[] = [];
  let total = 0;
  for (const t of weights) {
    manifest.push({ shape: t.shape.slice(), size: t.size });
    total += t.size;
  }
  const header = Buffer.from(JSON.stringify(manifest), 'utf-8');
  const buf = Buffer.alloc(4 + header.length + total * 4);
  buf.writeUInt32LE(header.length, 0);
  header.copy(buf, 4);
  let offset = 4 + header.length;
  for (const t of weights) {
    const data = t.dataSync() as Float32Array;
    for (let i = 0; i < data.length; i++) {
      buf.writeFloatLE(data[i], offset + i * 4);
    }
    offset += data.length * 4;
  }
  fs.writeFileSync(path, buf);
}

export function loadWeights(model: tf.LayersModel, path: string): void {
  const buf = fs.readFileSync(path);
  const headerLen = buf.readUInt32LE(0);
  const manifest = JSON.parse(buf.toString('utf-8', 4, 4 + headerLen));
  const current = model.getWeights();
  if (manifest.length !== current.length) {
    throw new Error(
      `checkpoint has ${manifest.length} tensors, model expects ${current.length}`);
  }
  let offset = 4 + headerLen;
  const tensors: tf.Tensor[] = [];
  for (let i = 0; i < manifest.length; i++) {
    const { shape, size } = manifest[i];
    if (JSON.stringify(shape) !== JSON.stringify(current[i].shape)) {
      throw new Error(
        `tensor ${i} shape ${shape} does not match model shape ${current[i].shape}`);
    }
    const data = new Float32Array(size);
    for (let j = 0; j < size; j++) {
      data[j] = buf.readFloatLE(offset + j * 4);
    }
    offset += size * 4;
    tensors.push(tf.tensor(data, shape));
  }
  model.setWeights(tensors);
  tensors.forEach((t) => t.dispose());
}

/** Append metrics as line-delimited JSON. */
export function writeMetrics(path: string, tag: string, records: EpochRecord[]): void {
  const lines = records.map((r) => JSON.stringify({ tag, ...r }));
  fs.appendFileSync(path, lines.join('\n') + '\n');
}
