/**
 * Dataset assembly: WCT coefficient batches or CIFAR RGB batches into the
 * NHWC float tensors the models consume.
 */

import * as tf from '@tensorflow/tfjs';

import { CifarBatch } from './cifar';
import { WctFile, readLabels, readWct } from './wct';

export interface Dataset {
  /** [count, h, w, channels] float32. */
  x: tf.Tensor4D;
  /** [count] float32 class indices (tfjs' sparse loss wants floats). */
  y: tf.Tensor1D;
  count: number;
}

/** Channel-major [C,H,W] batch -> NHWC tensor. */
export function nchwToNhwc(data: Float32Array, count: number, channels: number,
                           height: number, width: number): Float32Array {
  const out = new Float32Array(data.length);
  const chw = channels * height * width;
  const hw = height * width;
  for (let i = 0; i < count; i++) {
    for (let c = 0; c < channels; c++) {
      for (let p = 0; p < hw; p++) {
        out[i * chw + p * channels + c] = data[i * chw + c * hw + p];
      }
    }
  }
  return out;
}

export function datasetFromWct(file: WctFile, labels: ArrayLike<number>): Dataset {
  if (labels.length !== file.count) {
    throw new Error(`label count ${labels.length} != tensor count ${file.count}`);
  }
  const nhwc = nchwToNhwc(file.data, file.count, file.channels, file.height, file.width);
  return {
    x: tf.tensor4d(nhwc, [file.count, file.height, file.width, file.channels]),
    y: tf.tensor1d(Float32Array.from(labels as ArrayLike<number>)),
    count: file.count,
  };
}

export function loadWctDataset(wctPath: string, labelPath: string): Dataset {
  const file = readWct(wctPath);
  const labels = readLabels(labelPath, file.count);
  return datasetFromWct(file, labels);
}

/** CIFAR pixels [0,255] -> level-offset floats centred on zero, like the
 * codec's precoding, so both domains see zero-mean inputs. */
export function datasetFromCifar(batch: CifarBatch): Dataset {
  const x = new Float32Array(batch.pixels.length);
  for (let i = 0; i < batch.pixels.length; i++) {
    x[i] = batch.pixels[i] - 128;
  }
  return {
    x: tf.tensor4d(x, [batch.count, 32, 32, 3]),
    y: tf.tensor1d(Float32Array.from(batch.labels)),
    count: batch.count,
  };
}

export function disposeDataset(ds: Dataset): void {
  ds.x.dispose();
  ds.y.dispose();
}
