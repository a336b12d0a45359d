#include "mrsim/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mrsim {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

// Pinned float formatting so reports are byte-identical across runs.
std::string fmt(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

constexpr const char* kLaneColors[] = {"#4c78a8", "#f58518", "#54a24b",
                                       "#e45756", "#72b7b2", "#b279a2",
                                       "#ff9da6", "#9d755d"};

}  // namespace

std::vector<IndicatorSummary> summarize_runs(
    const ExecutionTrace& trace, std::span<const IndicatorRun> runs) {
  std::vector<IndicatorSummary> out;
  out.reserve(runs.size());
  for (const auto& run : runs) {
    std::vector<double> errors;
    errors.reserve(run.series.size());
    for (const auto& s : run.series) {
      errors.push_back(std::abs(s.progress - optimal_progress(trace, s.t)));
    }
    IndicatorSummary row;
    row.indicator = run.indicator;
    row.errors = summarize(errors);
    row.overhead = make_overhead(run.map_profile_bytes,
                                 run.reduce_profile_bytes,
                                 trace.total_shuffle_bytes);
    out.push_back(std::move(row));
  }
  return out;
}

void write_progress_csv(const std::filesystem::path& path,
                        const ExecutionTrace& trace,
                        std::span<const IndicatorRun> runs) {
  auto out = open_out(path);
  out << "t_ms,indicator,estimated_progress,optimal_progress,error\n";
  for (const auto& run : runs) {
    for (const auto& s : run.series) {
      const double opt = optimal_progress(trace, s.t);
      out << s.t << ',' << run.indicator << ',' << fmt(s.progress) << ','
          << fmt(opt) << ',' << fmt(std::abs(s.progress - opt)) << '\n';
    }
  }
}

void write_swimlanes_csv(const std::filesystem::path& path,
                         const ExecutionTrace& trace) {
  auto out = open_out(path);
  out << "task_id,worker,start_ms,end_ms,kind\n";
  for (const auto& t : trace.map_tasks) {
    out << t.task_id << ',' << t.worker << ',' << t.start << ',' << t.end
        << ",map\n";
  }
  for (const auto& t : trace.reduce_tasks) {
    out << t.task_id << ',' << t.worker << ',' << t.start << ',' << t.end
        << ",reduce\n";
  }
}

void write_summary_csv(const std::filesystem::path& path,
                       std::span<const IndicatorSummary> rows) {
  auto out = open_out(path);
  out << "indicator,avg_err,max_err,map_profile_bytes,reduce_profile_bytes,"
         "shuffle_bytes,overhead_pct\n";
  for (const auto& r : rows) {
    out << r.indicator << ',' << fmt(r.errors.avg, 4) << ','
        << fmt(r.errors.max, 4) << ',' << r.overhead.map_profile_bytes << ','
        << r.overhead.reduce_profile_bytes << ',' << r.overhead.shuffle_bytes
        << ',' << fmt(r.overhead.overhead_pct, 6) << '\n';
  }
}

void write_trace_events_csv(const std::filesystem::path& path,
                            const ExecutionTrace& trace) {
  auto out = open_out(path);
  out << "event,task_id,key_hash,size_bytes,t_ms\n";
  for (const auto& t : trace.map_tasks) {
    out << "map_start," << t.task_id << ",," << t.input_bytes << ','
        << t.start << '\n';
    out << "map_end," << t.task_id << ",," << t.input_bytes << ',' << t.end
        << '\n';
  }
  for (const auto& t : trace.reduce_tasks) {
    out << "reduce_start," << t.task_id << ",," << t.input_bytes << ','
        << t.start << '\n';
    for (const auto& f : t.functions) {
      out << "reduce_fn," << t.task_id << ',' << f.key << ',' << f.size_bytes
          << ',' << f.end << '\n';
    }
    out << "reduce_end," << t.task_id << ",," << t.input_bytes << ',' << t.end
        << '\n';
  }
}

void write_progress_svg(const std::filesystem::path& path,
                        const ExecutionTrace& trace,
                        std::span<const IndicatorRun> runs) {
  auto out = open_out(path);
  const double width = 860, height = 520;
  const double ml = 70, mr = 210, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  const SimTime t0 = trace.phases.reduce_start;
  const SimTime t1 = trace.phases.job_end;
  double max_progress = 100.0;
  for (const auto& run : runs) {
    for (const auto& s : run.series) {
      max_progress = std::max(max_progress, s.progress);
    }
  }
  max_progress = std::min(max_progress, 200.0);  // clip wild overestimates

  auto x_of = [&](SimTime t) {
    return ml + (t1 > t0 ? static_cast<double>(t - t0) /
                               static_cast<double>(t1 - t0) * pw
                         : 0.0);
  };
  auto y_of = [&](double p) {
    return mt + ph - std::min(p, max_progress) / max_progress * ph;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\">Reduce phase progress</text>\n";

  // Axes and gridlines every 25 percentage points.
  for (double p = 0; p <= max_progress + 1e-9; p += 25.0) {
    const double y = y_of(p);
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(p, 0) << "</text>\n";
  }
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"#333333\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"#333333\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">t (ms since reduce start, "
      << (t1 - t0) << " ms total)</text>\n";

  // Optimal progress reference.
  out << "<line x1=\"" << x_of(t0) << "\" y1=\"" << y_of(0) << "\" x2=\""
      << x_of(t1) << "\" y2=\"" << y_of(100) << "\" stroke=\"#888888\" "
      << "stroke-dasharray=\"6 4\"/>\n";

  std::size_t color = 0;
  double legend_y = mt + 10;
  for (const auto& run : runs) {
    const char* stroke = kLaneColors[color % std::size(kLaneColors)];
    out << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& s : run.series) {
      out << fmt(x_of(s.t), 2) << ',' << fmt(y_of(s.progress), 2) << ' ';
    }
    out << "\"/>\n";
    out << "<rect x=\"" << ml + pw + 16 << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << stroke << "\"/>\n";
    out << "<text x=\"" << ml + pw + 34 << "\" y=\"" << legend_y + 2
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << run.indicator
        << "</text>\n";
    legend_y += 20;
    ++color;
  }
  out << "<text x=\"" << ml + pw + 16 << "\" y=\"" << legend_y + 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#888888\">dashed: optimal</text>\n";
  out << "</svg>\n";
}

void write_swimlanes_svg(const std::filesystem::path& path,
                         const ExecutionTrace& trace) {
  auto out = open_out(path);
  const std::size_t lanes = trace.map_tasks.size() + trace.reduce_tasks.size();
  const double row_h = 18, ml = 120, mr = 30, mt = 40, mb = 40;
  const double pw = 700;
  const double height = mt + mb + row_h * static_cast<double>(lanes);
  const double width = ml + pw + mr;
  const SimTime t1 = std::max<SimTime>(trace.phases.job_end, 1);

  auto x_of = [&](SimTime t) {
    return ml + static_cast<double>(t) / static_cast<double>(t1) * pw;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\">Task swimlanes</text>\n";

  double y = mt;
  auto draw = [&](const TaskTimeline& t, const char* label, const char* fill) {
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + row_h - 6
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << label << ' ' << t.task_id << " (w" << t.worker << ")</text>\n";
    out << "<rect x=\"" << fmt(x_of(t.start), 2) << "\" y=\"" << y + 2
        << "\" width=\""
        << fmt(std::max(1.0, x_of(t.end) - x_of(t.start)), 2)
        << "\" height=\"" << row_h - 6 << "\" fill=\"" << fill << "\"/>\n";
    y += row_h;
  };
  for (const auto& t : trace.map_tasks) draw(t, "map", "#9ecae9");
  for (const auto& t : trace.reduce_tasks) {
    draw(t, "reduce",
         kLaneColors[static_cast<std::size_t>(t.worker) %
                     std::size(kLaneColors)]);
  }
  // Phase boundaries.
  for (SimTime b : {trace.phases.map_end, trace.phases.reduce_start}) {
    out << "<line x1=\"" << fmt(x_of(b), 2) << "\" y1=\"" << mt << "\" x2=\""
        << fmt(x_of(b), 2) << "\" y2=\"" << y
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  out << "<text x=\"" << ml << "\" y=\"" << y + 24
      << "\" font-family=\"sans-serif\" font-size=\"12\">0 .. " << t1
      << " ms</text>\n";
  out << "</svg>\n";
}

}  // namespace mrsim
