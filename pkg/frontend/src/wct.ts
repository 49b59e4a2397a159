/**
 * WCT container I/O: the binary interchange format produced by the wavecoef
 * pipeline.
 *
 * Layout (all little-endian):
 *   "WCT1" magic | u16 version | u8 dtype (0 = float32) | u8 flags |
 *   u32 height | u32 width | u32 channels | u32 count | payload
 *
 * Payload is count * channels * height * width float32 values,
 * channel-major, row-major within a channel.  Labels ride in a sidecar file
 * of bare u16 values (one per tensor), conventionally `<stem>.lbl`.
 */

import * as fs from 'fs';

export const WCT_MAGIC = 'WCT1';
export const WCT_VERSION = 1;
export const WCT_DTYPE_F32 = 0;
const HEADER_BYTES = 24;

export interface WctFile {
  /** Tensor batch, shape [count, channels, height, width], flattened. */
  data: Float32Array;
  count: number;
  channels: number;
  height: number;
  width: number;
  flags: number;
}

export class WctFormatError extends Error {}

export function readWct(path: string): WctFile {
  const buf = fs.readFileSync(path);
  if (buf.length < HEADER_BYTES) {
    throw new WctFormatError(`file too short for a WCT header (${buf.length} bytes)`);
  }
  const magic = buf.toString('ascii', 0, 4);
  if (magic !== WCT_MAGIC) {
    throw new WctFormatError(`bad magic "${magic}", expected "${WCT_MAGIC}"`);
  }
  const version = buf.readUInt16LE(4);
  if (version !== WCT_VERSION) {
    throw new WctFormatError(`unsupported WCT version ${version}`);
  }
  const dtype = buf.readUInt8(6);
  if (dtype !== WCT_DTYPE_F32) {
    throw new WctFormatError(`unknown dtype code ${dtype}`);
  }
  const flags = buf.readUInt8(7);
  const height = buf.readUInt32LE(8);
  const width = buf.readUInt32LE(12);
  const channels = buf.readUInt32LE(16);
  const count = buf.readUInt32LE(20);
  const expected = count * channels * height * width * 4;
  if (buf.length - HEADER_BYTES !== expected) {
    throw new WctFormatError(
      `payload is ${buf.length - HEADER_BYTES} bytes but header declares ${expected}`);
  }
  // copy out of the Buffer so the view owns aligned memory
  const data = new Float32Array(expected / 4);
  for (let i = 0; i < data.length; i++) {
    data[i] = buf.readFloatLE(HEADER_BYTES + i * 4);
  }
  return { data, count, channels, height, width, flags };
}

export function writeWct(path: string, file: WctFile): void {
  const { data, count, channels, height, width, flags } = file;
  if (data.length !== count * channels * height * width) {
    throw new WctFormatError('data length does not match declared dimensions');
  }
  const buf = Buffer.alloc(HEADER_BYTES + data.length * 4);
  buf.write(WCT_MAGIC, 0, 'ascii');
  buf.writeUInt16LE(WCT_VERSION, 4);
  buf.writeUInt8(WCT_DTYPE_F32, 6);
  buf.writeUInt8(flags & 0xff, 7);
  buf.writeUInt32LE(height, 8);
  buf.writeUInt32LE(width, 12);
  buf.writeUInt32LE(channels, 16);
  buf.writeUInt32LE(count, 20);
  for (let i = 0; i < data.length; i++) {
    buf.writeFloatLE(data[i], HEADER_BYTES + i * 4);
  }
  fs.writeFileSync(path, buf);
}

export function readLabels(path: string, expectedCount?: number): Uint16Array {
  const buf = fs.readFileSync(path);
  if (buf.length % 2 !== 0) {
    throw new WctFormatError(`label sidecar has odd byte length ${buf.length}`);
  }
  const labels = new Uint16Array(buf.length / 2);
  for (let i = 0; i < labels.length; i++) {
    labels[i] = buf.readUInt16LE(i * 2);
  }
  if (expectedCount !== undefined && labels.length !== expectedCount) {
    throw new WctFormatError(
      `label count ${labels.length} does not match tensor count ${expectedCount}`);
  }
  return labels;
}

export function writeLabels(path: string, labels: ArrayLike<number>): void {
  const buf = Buffer.alloc(labels.length * 2);
  for (let i = 0; i < labels.length; i++) {
    buf.writeUInt16LE(labels[i], i * 2);
  }
  fs.writeFileSync(path, buf);
}

/** One tensor's view into a WCT batch, shape [channels, height, width]. */
export function tensorAt(file: WctFile, index: number): Float32Array {
  const size = file.channels * file.height * file.width;
  if (index < 0 || index >= file.count) {
    throw new RangeError(`tensor index ${index} out of range 0..${file.count - 1}`);
  }
  return file.data.subarray(index * size, (index + 1) * size);
}
