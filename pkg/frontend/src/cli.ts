#!/usr/bin/env node
/** crossalign-export: embed an image folder into an AD01 feature file. */

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { MissingWeightsError, loadBackbone, recipeFor } from './backbones.js';
import { runExport } from './export.js';

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .command('export', 'embed every image in a folder and write AD01', (cmd) =>
      cmd
        .option('dir', { type: 'string', demandOption: true, describe: 'image folder' })
        .option('backbone', {
          type: 'string',
          demandOption: true,
          choices: ['moco', 'dino', 'vit', 'clip', 'sscd'],
        })
        .option('out', { type: 'string', demandOption: true, describe: 'AD01 output path' })
        .option('weights', {
          type: 'string',
          default: 'weights',
          describe: 'directory holding <backbone>/model.json checkpoints',
        })
        .option('batch', { type: 'number', default: 16 }),
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    })
    .parse();

  const recipe = recipeFor(args.backbone as string);
  const extractor = await loadBackbone(recipe.name, args.weights as string);
  const result = await runExport({
    imageDir: args.dir as string,
    recipe,
    extractor,
    output: args.out as string,
    batchSize: args.batch as number,
    log: (message) => console.error(message),
  });
  console.log(
    JSON.stringify({ exported: result.exported, skipped: result.skipped.length, output: result.output }),
  );
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop() ?? '');

if (invokedDirectly) {
  main(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((err) => {
      if (err instanceof MissingWeightsError) {
        console.error(`missing weights: ${err.message}`);
        process.exit(3);
      }
      console.error(`error: ${err.message ?? err}`);
      process.exit(2);
    });
}
