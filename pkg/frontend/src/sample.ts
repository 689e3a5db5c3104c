// The bundled sample: six candidate itineraries between Sadeghiyeh Square
// and Amirkabir University (Tehran, 18:00 weekday) from the Neshan routing
// app — the same fixture the service's own test data ships.

import type { RouteDraft } from "./types.js";

export function neshanSample(): RouteDraft[] {
  return [
    {
      id: "neshan-1",
      label: "on foot the whole way (1 h 36 min)",
      segments: [{ mode: "walking", kind: "minutes", value: 96 }],
    },
    {
      id: "neshan-2",
      label: "city bus, short walks at both ends",
      segments: [
        { mode: "walking", kind: "distance_m", value: 126 },
        { mode: "city_bus", kind: "stops", value: 18 },
        { mode: "walking", kind: "distance_m", value: 1080 },
      ],
    },
    {
      id: "neshan-3",
      label: "city bus, longer walks",
      segments: [
        { mode: "walking", kind: "distance_m", value: 461 },
        { mode: "city_bus", kind: "stops", value: 17 },
        { mode: "walking", kind: "distance_m", value: 1490 },
      ],
    },
    {
      id: "neshan-4",
      label: "BRT feeder, then subway",
      segments: [
        { mode: "walking", kind: "distance_m", value: 190 },
        { mode: "brt", kind: "stops", value: 2 },
        { mode: "walking", kind: "distance_m", value: 618 },
        { mode: "subway", kind: "stops", value: 6 },
        { mode: "walking", kind: "distance_m", value: 1020 },
      ],
    },
    {
      id: "neshan-5",
      label: "city bus feeder, then BRT",
      segments: [
        { mode: "walking", kind: "distance_m", value: 190 },
        { mode: "city_bus", kind: "stops", value: 2 },
        { mode: "walking", kind: "distance_m", value: 105 },
        { mode: "brt", kind: "stops", value: 9 },
        { mode: "walking", kind: "distance_m", value: 1090 },
      ],
    },
    {
      id: "neshan-6",
      label: "door to door by car (28 min)",
      segments: [{ mode: "car", kind: "minutes", value: 28 }],
    },
  ];
}

// Default prevalence: the preset population's infectious fraction.
export const DEFAULT_PREVALENCE = 727550 / 84055000;
