/** PNG/JPEG decoding to planar RGB float arrays in [0, 1]. */

import { promises as fs } from 'fs';
import * as path from 'path';
import jpeg from 'jpeg-js';
import { PNG } from 'pngjs';

export interface RgbImage {
  width: number;
  height: number;
  /** interleaved RGB, values in [0, 1], length = width * height * 3 */
  pixels: Float32Array;
}

export class UndecodableImageError extends Error {}

const EXTENSIONS = new Set(['.png', '.jpg', '.jpeg']);

export function isImagePath(file: string): boolean {
  return EXTENSIONS.has(path.extname(file).toLowerCase());
}

function fromRgba(width: number, height: number, rgba: Uint8Array): RgbImage {
  const pixels = new Float32Array(width * height * 3);
  for (let p = 0; p < width * height; p++) {
    pixels[3 * p] = rgba[4 * p] / 255;
    pixels[3 * p + 1] = rgba[4 * p + 1] / 255;
    pixels[3 * p + 2] = rgba[4 * p + 2] / 255;
  }
  return { width, height, pixels };
}

export async function decodeImage(file: string): Promise<RgbImage> {
  const raw = await fs.readFile(file);
  const ext = path.extname(file).toLowerCase();
  try {
    if (ext === '.png') {
      const png = PNG.sync.read(raw);
      return fromRgba(png.width, png.height, png.data);
    }
    if (ext === '.jpg' || ext === '.jpeg') {
      const img = jpeg.decode(raw, { useTArray: true, maxMemoryUsageInMB: 512 });
      return fromRgba(img.width, img.height, img.data);
    }
  } catch (err) {
    throw new UndecodableImageError(`${file}: ${(err as Error).message}`);
  }
  throw new UndecodableImageError(`${file}: unsupported extension ${ext}`);
}

/**
 * Nearest-neighbour resize to size x size. Deterministic and dependency-free;
 * backbones here care about coarse content, not resampling quality.
 */
export function resize(image: RgbImage, size: number): RgbImage {
  const pixels = new Float32Array(size * size * 3);
  for (let y = 0; y < size; y++) {
    const sy = Math.min(image.height - 1, Math.floor((y * image.height) / size));
    for (let x = 0; x < size; x++) {
      const sx = Math.min(image.width - 1, Math.floor((x * image.width) / size));
      const src = 3 * (sy * image.width + sx);
      const dst = 3 * (y * size + x);
      pixels[dst] = image.pixels[src];
      pixels[dst + 1] = image.pixels[src + 1];
      pixels[dst + 2] = image.pixels[src + 2];
    }
  }
  return { width: size, height: size, pixels };
}

/** Channel-wise (x - mean) / std, in place ordering R, G, B. */
export function normalize(image: RgbImage, mean: number[], std: number[]): Float32Array {
  const out = new Float32Array(image.pixels.length);
  for (let p = 0; p < image.width * image.height; p++) {
    for (let c = 0; c < 3; c++) {
      out[3 * p + c] = (image.pixels[3 * p + c] - mean[c]) / std[c];
    }
  }
  return out;
}
