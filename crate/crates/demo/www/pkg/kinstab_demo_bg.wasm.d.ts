/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_cfview_free: (a: number, b: number) => void;
export const __wbg_pathview_free: (a: number, b: number) => void;
export const __wbg_rateview_free: (a: number, b: number) => void;
export const cfview_empirical: (a: number) => [number, number];
export const cfview_exact: (a: number) => [number, number];
export const cfview_maxGap: (a: number) => number;
export const cfview_xi: (a: number) => [number, number];
export const pathview_coarseT: (a: number) => [number, number];
export const pathview_coarseV: (a: number) => [number, number];
export const pathview_coarseX: (a: number) => [number, number];
export const pathview_refT: (a: number) => [number, number];
export const pathview_refV: (a: number) => [number, number];
export const pathview_refX: (a: number) => [number, number];
export const pathview_supError: (a: number) => number;
export const rateCurve: (a: number, b: number, c: number, d: number) => [number, number, number];
export const rateview_error: (a: number) => [number, number];
export const rateview_n: (a: number) => [number, number];
export const rateview_rSquared: (a: number) => number;
export const rateview_theoretical: (a: number) => number;
export const simulatePath: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const stableCf: (a: number, b: number, c: number) => [number, number, number];
export const rateview_slope: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
