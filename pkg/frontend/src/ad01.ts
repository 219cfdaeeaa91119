/**
 * AD01 tensor files: the binary interchange format of the crossalign toolkit.
 *
 * Layout (little-endian): 4-byte magic "AD01", uint32 row count, uint32
 * column count, then rows*cols float32 values in row-major order. Row ids
 * live in a sidecar next to the tensor, same stem with extension `.ids`,
 * one id per line.
 */

import { promises as fs } from 'fs';
import * as path from 'path';

export const AD01_MAGIC = 'AD01';
const HEADER_BYTES = 12;

export interface Ad01Matrix {
  rows: number;
  dims: number;
  /** row-major, rows*dims entries */
  data: Float32Array;
  ids?: string[];
}

export function idsPath(tensorPath: string): string {
  const parsed = path.parse(tensorPath);
  return path.join(parsed.dir, `${parsed.name}.ids`);
}

export function encodeAd01(matrix: Ad01Matrix): Buffer {
  const { rows, dims, data } = matrix;
  if (!Number.isInteger(rows) || !Number.isInteger(dims) || rows < 1 || dims < 1) {
    throw new Error(`invalid shape ${rows}x${dims}`);
  }
  if (data.length !== rows * dims) {
    throw new Error(`payload has ${data.length} values, expected ${rows * dims}`);
  }
  for (let i = 0; i < data.length; i++) {
    if (!Number.isFinite(data[i])) {
      throw new Error(`non-finite value at row ${Math.floor(i / dims)}`);
    }
  }
  const buffer = Buffer.alloc(HEADER_BYTES + 4 * rows * dims);
  buffer.write(AD01_MAGIC, 0, 'ascii');
  buffer.writeUInt32LE(rows, 4);
  buffer.writeUInt32LE(dims, 8);
  for (let i = 0; i < data.length; i++) {
    buffer.writeFloatLE(data[i], HEADER_BYTES + 4 * i);
  }
  return buffer;
}

export function decodeAd01(buffer: Buffer): Ad01Matrix {
  if (buffer.length < HEADER_BYTES) {
    throw new Error(`header truncated at byte ${buffer.length}`);
  }
  const magic = buffer.toString('ascii', 0, 4);
  if (magic !== AD01_MAGIC) {
    throw new Error(`bad magic ${JSON.stringify(magic)} at byte 0`);
  }
  const rows = buffer.readUInt32LE(4);
  const dims = buffer.readUInt32LE(8);
  const expected = HEADER_BYTES + 4 * rows * dims;
  if (buffer.length !== expected) {
    throw new Error(`body has ${buffer.length} bytes, expected ${expected}`);
  }
  const data = new Float32Array(rows * dims);
  for (let i = 0; i < data.length; i++) {
    data[i] = buffer.readFloatLE(HEADER_BYTES + 4 * i);
  }
  return { rows, dims, data };
}

/** Write tensor + optional ids sidecar atomically (temp file, then rename). */
export async function writeAd01(tensorPath: string, matrix: Ad01Matrix): Promise<void> {
  const buffer = encodeAd01(matrix);
  const tmp = `${tensorPath}.tmp-${process.pid}`;
  await fs.writeFile(tmp, buffer);
  await fs.rename(tmp, tensorPath);
  if (matrix.ids) {
    if (matrix.ids.length !== matrix.rows) {
      throw new Error(`got ${matrix.ids.length} ids for ${matrix.rows} rows`);
    }
    const sidecar = idsPath(tensorPath);
    const tmpIds = `${sidecar}.tmp-${process.pid}`;
    await fs.writeFile(tmpIds, matrix.ids.join('\n') + '\n', 'utf8');
    await fs.rename(tmpIds, sidecar);
  }
}

export async function readAd01(tensorPath: string): Promise<Ad01Matrix> {
  const matrix = decodeAd01(await fs.readFile(tensorPath));
  try {
    const text = await fs.readFile(idsPath(tensorPath), 'utf8');
    matrix.ids = text.split('\n').filter((line) => line.length > 0);
  } catch {
    // sidecar is optional
  }
  return matrix;
}
