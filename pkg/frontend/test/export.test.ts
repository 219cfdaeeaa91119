import { mkdir, mkdtemp, readFile, rm, writeFile } from 'fs/promises';
import { tmpdir } from 'os';
import * as path from 'path';
import { PNG } from 'pngjs';
import { afterEach, beforeEach, describe, expect, it } from 'vitest';
import { readAd01 } from '../src/ad01.js';
import {
  FeatureExtractor,
  MissingWeightsError,
  loadBackbone,
  recipeFor,
} from '../src/backbones.js';
import { decodeImage, resize } from '../src/decode.js';
import { runExport } from '../src/export.js';

let dir: string;

beforeEach(async () => {
  dir = await mkdtemp(path.join(tmpdir(), 'export-'));
});

afterEach(async () => {
  await rm(dir, { recursive: true, force: true });
});

function solidPng(width: number, height: number, rgb: [number, number, number]): Buffer {
  const png = new PNG({ width, height });
  for (let p = 0; p < width * height; p++) {
    png.data[4 * p] = rgb[0];
    png.data[4 * p + 1] = rgb[1];
    png.data[4 * p + 2] = rgb[2];
    png.data[4 * p + 3] = 255;
  }
  return PNG.sync.write(png);
}

async function writeImages(folder: string, count: number): Promise<void> {
  await mkdir(folder, { recursive: true });
  for (let i = 0; i < count; i++) {
    const value = Math.round((255 * i) / Math.max(1, count - 1));
    await writeFile(path.join(folder, `img${i}.png`), solidPng(8, 6, [value, 128, 255 - value]));
  }
}

/** Deterministic stand-in: mean/extremes of the preprocessed pixels. */
class StubExtractor implements FeatureExtractor {
  featureDim = 4;

  async embed(batch: Float32Array, n: number, size: number): Promise<Float32Array> {
    const per = size * size * 3;
    const out = new Float32Array(n * this.featureDim);
    for (let i = 0; i < n; i++) {
      const slice = batch.subarray(i * per, (i + 1) * per);
      let sum = 0;
      let min = Infinity;
      let max = -Infinity;
      for (const v of slice) {
        sum += v;
        min = Math.min(min, v);
        max = Math.max(max, v);
      }
      out.set([sum / per, min, max, slice[0]], i * this.featureDim);
    }
    return out;
  }
}

describe('decodeImage / resize', () => {
  it('decodes png pixels into [0, 1] rgb', async () => {
    const file = path.join(dir, 'x.png');
    await writeFile(file, solidPng(4, 3, [255, 0, 128]));
    const image = await decodeImage(file);
    expect(image.width).toBe(4);
    expect(image.height).toBe(3);
    expect(image.pixels[0]).toBeCloseTo(1.0, 6);
    expect(image.pixels[1]).toBeCloseTo(0.0, 6);
    expect(image.pixels[2]).toBeCloseTo(128 / 255, 6);
    const small = resize(image, 2);
    expect(small.width).toBe(2);
    expect(small.pixels.length).toBe(2 * 2 * 3);
  });

  it('rejects undecodable bytes', async () => {
    const file = path.join(dir, 'broken.png');
    await writeFile(file, Buffer.from('not a png'));
    await expect(decodeImage(file)).rejects.toThrow(/broken.png/);
  });
});

describe('runExport', () => {
  it('writes one row per image with relative-path ids', async () => {
    const images = path.join(dir, 'images');
    await writeImages(images, 3);
    const out = path.join(dir, 'feats.ad01');
    const result = await runExport({
      imageDir: images,
      recipe: recipeFor('dino'),
      extractor: new StubExtractor(),
      output: out,
    });
    expect(result.exported).toBe(3);
    const matrix = await readAd01(out);
    expect(matrix.rows).toBe(3);
    expect(matrix.dims).toBe(4);
    expect(matrix.ids).toEqual(['img0.png', 'img1.png', 'img2.png']);
    const manifest = JSON.parse(await readFile(`${out}.manifest.json`, 'utf8'));
    expect(manifest.backbone).toBe('dino');
    expect(manifest.exported).toBe(3);
  });

  it('is deterministic across runs', async () => {
    const images = path.join(dir, 'images');
    await writeImages(images, 4);
    const out1 = path.join(dir, 'a.ad01');
    const out2 = path.join(dir, 'b.ad01');
    const job = (output: string) => ({
      imageDir: images,
      recipe: recipeFor('moco'),
      extractor: new StubExtractor(),
      output,
    });
    await runExport(job(out1));
    await runExport(job(out2));
    expect(Buffer.compare(await readFile(out1), await readFile(out2))).toBe(0);
  });

  it('skips undecodable images and logs them', async () => {
    const images = path.join(dir, 'images');
    await writeImages(images, 2);
    await writeFile(path.join(images, 'junk.png'), Buffer.from('garbage'));
    const logs: string[] = [];
    const out = path.join(dir, 'feats.ad01');
    const result = await runExport({
      imageDir: images,
      recipe: recipeFor('vit'),
      extractor: new StubExtractor(),
      output: out,
      log: (m) => logs.push(m),
    });
    expect(result.exported).toBe(2);
    expect(result.skipped).toEqual(['junk.png']);
    expect(logs.some((l) => l.includes('junk.png'))).toBe(true);
    const matrix = await readAd01(out);
    expect(matrix.rows).toBe(2);
  });

  it('fails when the folder has no images', async () => {
    const empty = path.join(dir, 'empty');
    await mkdir(empty);
    await expect(
      runExport({
        imageDir: empty,
        recipe: recipeFor('sscd'),
        extractor: new StubExtractor(),
        output: path.join(dir, 'x.ad01'),
      }),
    ).rejects.toThrow(/no images/);
  });
});

describe('loadBackbone', () => {
  it('aborts with MissingWeightsError when no checkpoint exists', async () => {
    await expect(loadBackbone('dino', path.join(dir, 'nowhere'))).rejects.toThrow(
      MissingWeightsError,
    );
  });

  it('loads a tfjs layers checkpoint from disk and embeds with it', async () => {
    const tf = await import('@tensorflow/tfjs');
    const recipe = recipeFor('clip');
    // tiny stand-in with the real wiring: pool pixels, project to featureDim
    const model = tf.sequential({
      layers: [
        tf.layers.globalAveragePooling2d({ inputShape: [recipe.imageSize, recipe.imageSize, 3], dataFormat: 'channelsLast' }),
        tf.layers.dense({ units: recipe.featureDim, kernelInitializer: 'ones', useBias: false }),
      ],
    });
    const modelDir = path.join(dir, 'weights', 'clip');
    await mkdir(modelDir, { recursive: true });
    await model.save({
      save: async (artifacts) => {
        const weightData = artifacts.weightData as ArrayBuffer;
        await writeFile(path.join(modelDir, 'weights.bin'), Buffer.from(weightData));
        await writeFile(
          path.join(modelDir, 'model.json'),
          JSON.stringify({
            modelTopology: artifacts.modelTopology,
            format: artifacts.format,
            generatedBy: artifacts.generatedBy,
            convertedBy: artifacts.convertedBy,
            weightsManifest: [{ paths: ['weights.bin'], weights: artifacts.weightSpecs }],
          }),
        );
        return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: 'JSON' } };
      },
    });

    const extractor = await loadBackbone('clip', path.join(dir, 'weights'));
    expect(extractor.featureDim).toBe(recipe.featureDim);

    const images = path.join(dir, 'images');
    await writeImages(images, 2);
    const out = path.join(dir, 'real.ad01');
    const result = await runExport({
      imageDir: images,
      recipe,
      extractor,
      output: out,
      batchSize: 2,
    });
    expect(result.exported).toBe(2);
    const matrix = await readAd01(out);
    expect(matrix.dims).toBe(recipe.featureDim);
    expect(Number.isFinite(matrix.data[0])).toBe(true);
  }, 120_000);
});
