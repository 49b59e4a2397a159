export * from './wct';
export * from './cifar';
export * from './rng';
export * from './augment';
export * from './model';
export * from './data';
export * from './train';
