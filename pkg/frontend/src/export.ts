/**
 * Export job: walk an image folder, embed every decodable image with the
 * selected backbone, and write one AD01 row per image with the relative
 * file path as its id. Undecodable files are skipped and logged; a manifest
 * JSON records the recipe, counts, and skip list.
 */

import { promises as fs } from 'fs';
import * as path from 'path';
import { Ad01Matrix, writeAd01 } from './ad01.js';
import {
  BackboneRecipe,
  FeatureExtractor,
  preprocess,
} from './backbones.js';
import { UndecodableImageError, decodeImage, isImagePath } from './decode.js';

export interface ExportJob {
  imageDir: string;
  recipe: BackboneRecipe;
  extractor: FeatureExtractor;
  output: string;
  batchSize?: number;
  log?: (message: string) => void;
}

export interface ExportResult {
  exported: number;
  skipped: string[];
  output: string;
}

async function listImages(dir: string): Promise<string[]> {
  const found: string[] = [];
  async function walk(current: string): Promise<void> {
    const entries = await fs.readdir(current, { withFileTypes: true });
    for (const entry of entries.sort((a, b) => a.name.localeCompare(b.name))) {
      const full = path.join(current, entry.name);
      if (entry.isDirectory()) {
        await walk(full);
      } else if (isImagePath(entry.name)) {
        found.push(full);
      }
    }
  }
  await walk(dir);
  return found;
}

export async function runExport(job: ExportJob): Promise<ExportResult> {
  const log = job.log ?? (() => undefined);
  const batchSize = job.batchSize ?? 16;
  const { recipe, extractor } = job;
  const files = await listImages(job.imageDir);
  if (files.length === 0) {
    throw new Error(`no images found under ${job.imageDir}`);
  }

  const size = recipe.imageSize;
  const perImage = size * size * 3;
  const ids: string[] = [];
  const skipped: string[] = [];
  const rows: Float32Array[] = [];

  let batchPixels: Float32Array[] = [];
  const flush = async () => {
    if (batchPixels.length === 0) return;
    const n = batchPixels.length;
    const packed = new Float32Array(n * perImage);
    batchPixels.forEach((px, i) => packed.set(px, i * perImage));
    const features = await extractor.embed(packed, n, size);
    for (let i = 0; i < n; i++) {
      rows.push(features.slice(i * extractor.featureDim, (i + 1) * extractor.featureDim));
    }
    batchPixels = [];
  };

  for (const file of files) {
    const rel = path.relative(job.imageDir, file);
    try {
      const image = await decodeImage(file);
      batchPixels.push(preprocess(recipe, image));
      ids.push(rel);
    } catch (err) {
      if (err instanceof UndecodableImageError) {
        skipped.push(rel);
        log(`skipping undecodable image: ${rel}`);
        continue;
      }
      throw err;
    }
    if (batchPixels.length >= batchSize) {
      await flush();
    }
  }
  await flush();

  if (rows.length === 0) {
    throw new Error(`no decodable images under ${job.imageDir}`);
  }
  const dims = extractor.featureDim;
  const data = new Float32Array(rows.length * dims);
  rows.forEach((row, i) => data.set(row, i * dims));
  const matrix: Ad01Matrix = { rows: rows.length, dims, data, ids };
  await writeAd01(job.output, matrix);

  const manifest = {
    backbone: recipe.name,
    image_size: recipe.imageSize,
    normalization: { mean: recipe.mean, std: recipe.std },
    pooling: recipe.pooling,
    feature_dim: dims,
    exported: rows.length,
    skipped,
    output: path.basename(job.output),
  };
  await fs.writeFile(
    `${job.output}.manifest.json`,
    JSON.stringify(manifest, Object.keys(manifest).sort(), 2) + '\n',
    'utf8',
  );
  log(`exported ${rows.length} rows (${dims} dims) to ${job.output}`);
  return { exported: rows.length, skipped, output: job.output };
}
