/* tslint:disable */
/* eslint-disable */

/**
 * Empirical vs exact characteristic function of L_1 on a grid of frequencies.
 */
export class CfView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly empirical: Float64Array;
    readonly exact: Float64Array;
    readonly maxGap: number;
    readonly xi: Float64Array;
}

/**
 * Coarse scheme and reference solution driven by the same noise path.
 */
export class PathView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly coarseT: Float64Array;
    readonly coarseV: Float64Array;
    readonly coarseX: Float64Array;
    readonly refT: Float64Array;
    readonly refV: Float64Array;
    readonly refX: Float64Array;
    readonly supError: number;
}

/**
 * Strong error per step count with the fitted and theoretical rates.
 */
export class RateView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly error: Float64Array;
    readonly n: Float64Array;
    readonly rSquared: number;
    readonly slope: number;
    readonly theoretical: number;
}

export function rateCurve(alpha: number, beta: number, paths: number, seed: number): RateView;

export function simulatePath(alpha: number, beta: number, n: number, n_fine: number, seed: number): PathView;

export function stableCf(alpha: number, samples: number, seed: number): CfView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_cfview_free: (a: number, b: number) => void;
    readonly __wbg_pathview_free: (a: number, b: number) => void;
    readonly __wbg_rateview_free: (a: number, b: number) => void;
    readonly cfview_empirical: (a: number) => [number, number];
    readonly cfview_exact: (a: number) => [number, number];
    readonly cfview_maxGap: (a: number) => number;
    readonly cfview_xi: (a: number) => [number, number];
    readonly pathview_coarseT: (a: number) => [number, number];
    readonly pathview_coarseV: (a: number) => [number, number];
    readonly pathview_coarseX: (a: number) => [number, number];
    readonly pathview_refT: (a: number) => [number, number];
    readonly pathview_refV: (a: number) => [number, number];
    readonly pathview_refX: (a: number) => [number, number];
    readonly pathview_supError: (a: number) => number;
    readonly rateCurve: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly rateview_error: (a: number) => [number, number];
    readonly rateview_n: (a: number) => [number, number];
    readonly rateview_rSquared: (a: number) => number;
    readonly rateview_theoretical: (a: number) => number;
    readonly simulatePath: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly stableCf: (a: number, b: number, c: number) => [number, number, number];
    readonly rateview_slope: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
