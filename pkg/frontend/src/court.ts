/**
 * Court zone geometry for the zone picker.
 *
 * The numbering covers the attacking side of the net plus its out-of-bounds
 * fringe.  Zones 1-15 tile the court proper in three rows of five (front row
 * 11-15 next to the net, back row 1-5 at the baseline).  Zones 16 and 26 are
 * the out-of-bounds corners beside the front row, 22-25 run along the
 * sidelines beside the middle and back rows, and 17-21 are the five service
 * zones behind the baseline.
 */

export const GRID: ReadonlyArray<ReadonlyArray<number | null>> = [
  [16, 11, 12, 13, 14, 15, 26],
  [22, 6, 7, 8, 9, 10, 24],
  [23, 1, 2, 3, 4, 5, 25],
  [null, 17, 18, 19, 20, 21, null],
];

export const ALL_ZONES: readonly number[] = GRID.flatMap((row) =>
  row.filter((z): z is number => z !== null),
);

const IN_BOUNDS = new Set<number>();
for (let z = 1; z <= 15; z += 1) IN_BOUNDS.add(z);

const FRONT_ROW = new Set<number>([11, 12, 13, 14, 15, 16, 26]);
const IN_SYSTEM = new Set<number>([11, 12, 13]);
const SERVICE = new Set<number>([17, 18, 19, 20, 21]);

export interface ZoneInfo {
  zone: number;
  inBounds: boolean;
  frontRow: boolean;
  inSystem: boolean;
  service: boolean;
}

export function zoneInfo(zone: number): ZoneInfo {
  if (!Number.isInteger(zone) || zone < 1 || zone > 26) {
    throw new RangeError(`zone ${zone} is not in 1..26`);
  }
  return {
    zone,
    inBounds: IN_BOUNDS.has(zone),
    frontRow: FRONT_ROW.has(zone),
    inSystem: IN_SYSTEM.has(zone),
    service: SERVICE.has(zone),
  };
}
