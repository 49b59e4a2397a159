/**
 * Parameterized residual networks over either RGB images or packed
 * coefficient tensors.
 *
 * A network is three stacks of identical residual blocks after a stem
 * convolution.  Every block is conv-BN-relu-conv-BN plus the identity,
 * then relu.  Stacks 2 and 3 downsample by 2 at their first block and add a
 * 1x1 convolution on the shortcut to match shapes.  After stack 3 the map
 * is average-pooled with kernel k and fed to a dense softmax head.
 *
 * Total convolution count is therefore 2 * stacks * blocksPerStack + stacks
 * (the stem plus the two shortcut convolutions make up the "+ stacks" term
 * when stacks = 3).
 */

import * as tf from '@tensorflow/tfjs';

export interface ModelSpec {
  name: string;
  /** Input side length (pixels); feature maps shrink 4x by stack 3. */
  w: number;
  /** Input channels: 3 for RGB, 12 for packed coefficient tensors. */
  nc: number;
  /** Stack count; the published family always uses 3. */
  ns: number;
  /** Identical residual blocks per stack. */
  nb: number;
  /** Filter counts: stem, stack 1, stack 2, stack 3. */
  nf: [number, number, number, number];
  /** Average-pool kernel after stack 3; must equal w / 4. */
  k: number;
  classes: number;
}

/** The six published CIFAR-10 configurations: a-c RGB, d-f coefficient-domain. */
export const TABLE_SPECS: Record<string, ModelSpec> = {
  a: { name: 'a', w: 32, nc: 3, ns: 3, nb: 4, nf: [16, 16, 32, 64], k: 8, classes: 10 },
  b: { name: 'b', w: 32, nc: 3, ns: 3, nb: 3, nf: [16, 16, 32, 64], k: 8, classes: 10 },
  c: { name: 'c', w: 32, nc: 3, ns: 3, nb: 2, nf: [16, 16, 32, 64], k: 8, classes: 10 },
  d: { name: 'd', w: 16, nc: 12, ns: 3, nb: 3, nf: [64, 64, 96, 144], k: 4, classes: 10 },
  e: { name: 'e', w: 16, nc: 12, ns: 3, nb: 2, nf: [64, 64, 96, 144], k: 4, classes: 10 },
  f: { name: 'f', w: 16, nc: 12, ns: 3, nb: 1, nf: [64, 64, 96, 144], k: 4, classes: 10 },
};

/** Declared reference points: conv-layer counts and parameter totals (M). */
export const TABLE_REFERENCE: Record<string, { convLayers: number; paramsM: number }> = {
  a: { convLayers: 27, paramsM: 0.37 },
  b: { convLayers: 21, paramsM: 0.27 },
  c: { convLayers: 15, paramsM: 0.18 },
  d: { convLayers: 21, paramsM: 1.79 },
  e: { convLayers: 15, paramsM: 1.17 },
  f: { convLayers: 9, paramsM: 0.55 },
};

export function expectedConvLayers(spec: ModelSpec): number {
  return 2 * spec.ns * spec.nb + spec.ns;
}

export function validateSpec(spec: ModelSpec): void {
  if (spec.ns !== 3) {
    throw new Error(`this family uses 3 stacks, got ns=${spec.ns}`);
  }
  if (spec.nb < 1) {
    throw new Error(`blocks per stack must be >= 1, got ${spec.nb}`);
  }
  if (spec.w % 4 !== 0) {
    throw new Error(`input side must be divisible by 4, got w=${spec.w}`);
  }
  if (spec.k !== spec.w / 4) {
    throw new Error(`pool kernel ${spec.k} must equal w/4 = ${spec.w / 4}`);
  }
}

/** Build the network; `seed` makes weight initialization reproducible. */
export function buildModel(spec: ModelSpec, seed = 0): tf.LayersModel {
  validateSpec(spec);
  let nextSeed = seed;
  const conv = (filters: number, kernel: number, strides: number) =>
    tf.layers.conv2d({
      filters, kernelSize: kernel, strides, padding: 'same', useBias: false,
      kernelInitializer: tf.initializers.heNormal({ seed: nextSeed++ }),
    });

  const input = tf.input({ shape: [spec.w, spec.w, spec.nc] });
  let x = conv(spec.nf[0], 3, 1).apply(input) as tf.SymbolicTensor;
  x = tf.layers.batchNormalization().apply(x) as tf.SymbolicTensor;
  x = tf.layers.activation({ activation: 'relu' }).apply(x) as tf.SymbolicTensor;

  for (let stack = 1; stack <= spec.ns; stack++) {
    const filters = spec.nf[stack];
    for (let block = 0; block < spec.nb; block++) {
      const downsample = stack > 1 && block === 0;
      const strides = downsample ? 2 : 1;
      let shortcut = x;
      if (downsample) {
        // 1x1 convolution on the identity path to match the new shape
        shortcut = conv(filters, 1, 2).apply(x) as tf.SymbolicTensor;
      }
      let y = conv(filters, 3, strides).apply(x) as tf.SymbolicTensor;
      y = tf.layers.batchNormalization().apply(y) as tf.SymbolicTensor;
      y = tf.layers.activation({ activation: 'relu' }).apply(y) as tf.SymbolicTensor;
      y = conv(filters, 3, 1).apply(y) as tf.SymbolicTensor;
      y = tf.layers.batchNormalization().apply(y) as tf.SymbolicTensor;
      x = tf.layers.add().apply([shortcut, y]) as tf.SymbolicTensor;
      x = tf.layers.activation({ activation: 'relu' }).apply(x) as tf.SymbolicTensor;
    }
  }

  x = tf.layers.averagePooling2d({ poolSize: spec.k }).apply(x) as tf.SymbolicTensor;
  x = tf.layers.flatten().apply(x) as tf.SymbolicTensor;
  const output = tf.layers.dense({
    units: spec.classes, activation: 'softmax',
    kernelInitializer: tf.initializers.glorotUniform({ seed: nextSeed++ }),
  }).apply(x) as tf.SymbolicTensor;

  return tf.model({ inputs: input, outputs: output, name: `resnet_${spec.name}` });
}

/** Count conv2d layers actually present in a built model. */
export function countConvLayers(model: tf.LayersModel): number {
  return model.layers.filter((l) => l.getClassName() === 'Conv2D').length;
}
