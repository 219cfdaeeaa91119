/**
 * Backbone registry: preprocessing recipe and weight loading per model.
 *
 * Each supported backbone names its input size, channel normalization, and
 * the representation dimensionality of its global feature. Weights are
 * loaded from a local directory (`<weightsDir>/<backbone>/model.json`, a
 * TensorFlow.js layers or graph model export); nothing is downloaded. When
 * the weight files are absent the exporter aborts with MissingWeightsError
 * rather than inventing features.
 */

import { promises as fs } from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';
import { RgbImage, normalize, resize } from './decode.js';

export type BackboneName = 'moco' | 'dino' | 'vit' | 'clip' | 'sscd';

export class MissingWeightsError extends Error {}

export interface BackboneRecipe {
  name: BackboneName;
  imageSize: number;
  mean: number[];
  std: number[];
  featureDim: number;
  /** pooling applied to the model output, recorded in the manifest */
  pooling: string;
}

const IMAGENET_MEAN = [0.485, 0.456, 0.406];
const IMAGENET_STD = [0.229, 0.224, 0.225];
const CLIP_MEAN = [0.48145466, 0.4578275, 0.40821073];
const CLIP_STD = [0.26862954, 0.26130258, 0.27577711];

export const RECIPES: Record<BackboneName, BackboneRecipe> = {
  moco: { name: 'moco', imageSize: 224, mean: IMAGENET_MEAN, std: IMAGENET_STD, featureDim: 768, pooling: 'cls-token' },
  dino: { name: 'dino', imageSize: 224, mean: IMAGENET_MEAN, std: IMAGENET_STD, featureDim: 768, pooling: 'cls-token' },
  vit: { name: 'vit', imageSize: 224, mean: IMAGENET_MEAN, std: IMAGENET_STD, featureDim: 768, pooling: 'cls-token' },
  clip: { name: 'clip', imageSize: 224, mean: CLIP_MEAN, std: CLIP_STD, featureDim: 512, pooling: 'projection' },
  sscd: { name: 'sscd', imageSize: 288, mean: IMAGENET_MEAN, std: IMAGENET_STD, featureDim: 512, pooling: 'gem' },
};

export function recipeFor(name: string): BackboneRecipe {
  const recipe = RECIPES[name as BackboneName];
  if (!recipe) {
    throw new Error(`unknown backbone ${JSON.stringify(name)}; expected one of ${Object.keys(RECIPES).join(', ')}`);
  }
  return recipe;
}

/** Anything that turns a batch of preprocessed images into row features. */
export interface FeatureExtractor {
  featureDim: number;
  /** batch: [n, size, size, 3] normalized pixels -> [n, featureDim] */
  embed(batch: Float32Array, n: number, size: number): Promise<Float32Array>;
}

/** Preprocess one decoded image according to the recipe. */
export function preprocess(recipe: BackboneRecipe, image: RgbImage): Float32Array {
  return normalize(resize(image, recipe.imageSize), recipe.mean, recipe.std);
}

class TfjsExtractor implements FeatureExtractor {
  constructor(
    private readonly model: tf.LayersModel | tf.GraphModel,
    public readonly featureDim: number,
  ) {}

  async embed(batch: Float32Array, n: number, size: number): Promise<Float32Array> {
    const input = tf.tensor4d(batch, [n, size, size, 3]);
    try {
      const raw = this.model.predict(input) as tf.Tensor;
      const flat = raw.reshape([n, -1]);
      const values = (await flat.data()) as Float32Array;
      raw.dispose();
      flat.dispose();
      if (values.length !== n * this.featureDim) {
        throw new Error(
          `model produced ${values.length / n} features per image, expected ${this.featureDim}`,
        );
      }
      return Float32Array.from(values);
    } finally {
      input.dispose();
    }
  }
}

async function ioHandlerFor(modelDir: string): Promise<tf.io.IOHandler> {
  // plain @tensorflow/tfjs has no file:// loader; adapt the on-disk layout
  const manifestPath = path.join(modelDir, 'model.json');
  const manifest = JSON.parse(await fs.readFile(manifestPath, 'utf8'));
  return {
    load: async () => {
      const weightSpecs: tf.io.WeightsManifestEntry[] = [];
      const buffers: Buffer[] = [];
      for (const group of manifest.weightsManifest ?? []) {
        weightSpecs.push(...group.weights);
        for (const file of group.paths) {
          buffers.push(await fs.readFile(path.join(modelDir, file)));
        }
      }
      const weightData = new Uint8Array(Buffer.concat(buffers)).buffer;
      return {
        modelTopology: manifest.modelTopology,
        format: manifest.format,
        generatedBy: manifest.generatedBy,
        convertedBy: manifest.convertedBy,
        weightSpecs,
        weightData,
      };
    },
  };
}

/**
 * Load the named backbone from `<weightsDir>/<name>/model.json`.
 * Raises MissingWeightsError when the checkpoint is not present.
 */
export async function loadBackbone(
  name: BackboneName,
  weightsDir: string,
): Promise<FeatureExtractor> {
  const recipe = recipeFor(name);
  const modelDir = path.join(weightsDir, name);
  try {
    await fs.access(path.join(modelDir, 'model.json'));
  } catch {
    throw new MissingWeightsError(
      `no weights for ${name}: expected ${path.join(modelDir, 'model.json')}`,
    );
  }
  const handler = await ioHandlerFor(modelDir);
  let model: tf.LayersModel | tf.GraphModel;
  try {
    model = await tf.loadLayersModel(handler);
  } catch {
    model = await tf.loadGraphModel(handler);
  }
  return new TfjsExtractor(model, recipe.featureDim);
}
