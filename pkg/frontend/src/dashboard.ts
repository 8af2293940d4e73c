/**
 * Read-only reviewer dashboard data. Every number comes verbatim from a
 * service response; this module only arranges them into rows.
 */
import { AgreementReport, ApiClient } from "./api.js";

export interface DashboardRow {
  itemId: string;
  composite: number;
  weightsetId: string;
  dimensionScores: Record<string, number>;
  humanMean: Record<string, number> | null;
  ratingCount: Record<string, number> | null;
  tagHistogram: Record<string, number>;
}

export interface DashboardData {
  rows: DashboardRow[];
  agreement: Record<string, AgreementReport | null>;
  weightsetId: string;
}

export async function loadDashboard(api: ApiClient): Promise<DashboardData> {
  const health = await api.health();
  const ids = await api.itemIds();
  const rows: DashboardRow[] = [];
  for (const itemId of ids) {
    const report = await api.score(itemId);
    const aggregate = await api.aggregate(itemId);
    const dimensionScores: Record<string, number> = {};
    for (const [dim, score] of Object.entries(report.dimensions)) {
      dimensionScores[dim] = score.value;
    }
    rows.push({
      itemId,
      composite: report.composite,
      weightsetId: report.weightset_id,
      dimensionScores,
      humanMean: aggregate ? aggregate.normalized_mean : null,
      ratingCount: aggregate ? aggregate.count : null,
      tagHistogram: aggregate ? aggregate.tag_histogram : {},
    });
  }
  const dimensions = rows[0] ? Object.keys(rows[0].dimensionScores) : [];
  const agreement: Record<string, AgreementReport | null> = {};
  for (const dim of dimensions) {
    agreement[dim] = await api.agreement(dim);
  }
  return { rows, agreement, weightsetId: health.weightset_id };
}
