import type { CoarseType } from "./api.js";

/** Node color map shared by the subgraph view and legend. */
export const TYPE_COLORS: Record<CoarseType, string> = {
  Chemical: "red",
  Gene: "grey",
  Disease: "blue",
  Organism: "green",
};
