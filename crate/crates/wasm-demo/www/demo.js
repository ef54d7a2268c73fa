import init, { solve_case, convergence_study, haar_family } from './pkg/haarql_wasm.js';

const COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd'];
const $ = (id) => document.getElementById(id);

// series: [{ points: [[x, y], ...], color, mode: 'line' | 'dots' | 'step' }]
function plot(canvas, series, { logY = false, xLabel = 'x', integerX = false } = {}) {
  const ctx = canvas.getContext('2d');
  const W = canvas.width, H = canvas.height, pad = { l: 64, r: 16, t: 12, b: 30 };
  ctx.clearRect(0, 0, W, H);
  const ty = (v) => (logY ? Math.log10(v) : v);
  const pts = series.flatMap((s) => s.points).filter((p) => !logY || p[1] > 0);
  if (pts.length === 0) return;
  let [x0, x1] = [Math.min(...pts.map((p) => p[0])), Math.max(...pts.map((p) => p[0]))];
  let [y0, y1] = [Math.min(...pts.map((p) => ty(p[1]))), Math.max(...pts.map((p) => ty(p[1])))];
  if (x1 === x0) x1 = x0 + 1;
  if (y1 === y0) { y0 -= 0.5; y1 += 0.5; }
  const m = (y1 - y0) * 0.06; y0 -= m; y1 += m;
  const sx = (x) => pad.l + ((x - x0) / (x1 - x0)) * (W - pad.l - pad.r);
  const sy = (y) => H - pad.b - ((ty(y) - y0) / (y1 - y0)) * (H - pad.t - pad.b);

  ctx.strokeStyle = '#999'; ctx.fillStyle = '#444'; ctx.font = '11px sans-serif'; ctx.lineWidth = 1;
  ctx.strokeRect(pad.l, pad.t, W - pad.l - pad.r, H - pad.t - pad.b);
  for (let k = 0; k <= 5; k++) {
    const yv = y0 + ((y1 - y0) * k) / 5;
    const label = logY ? `1e${yv.toFixed(1)}` : yv.toPrecision(3);
    const py = H - pad.b - (k / 5) * (H - pad.t - pad.b);
    ctx.fillText(label, 4, py + 4);
    const xv = x0 + ((x1 - x0) * k) / 5;
    ctx.fillText(integerX ? Math.round(xv) : xv.toFixed(2), sx(xv) - 10, H - 10);
  }
  ctx.fillText(xLabel, W - pad.r - 20, H - 10);

  for (const s of series) {
    const p = s.points.filter((q) => !logY || q[1] > 0);
    ctx.strokeStyle = s.color; ctx.fillStyle = s.color; ctx.lineWidth = 2;
    if (s.mode === 'dots') {
      for (const [x, y] of p) { ctx.beginPath(); ctx.arc(sx(x), sy(y), 3.5, 0, 2 * Math.PI); ctx.fill(); }
      continue;
    }
    ctx.beginPath();
    p.forEach(([x, y], k) => {
      if (k === 0) ctx.moveTo(sx(x), sy(y));
      else if (s.mode === 'step') { ctx.lineTo(sx(x), sy(p[k - 1][1])); ctx.lineTo(sx(x), sy(y)); }
      else ctx.lineTo(sx(x), sy(y));
    });
    ctx.stroke();
  }
}

function legend(el, entries) {
  el.innerHTML = entries
    .map(([name, color]) => `<span><i class="swatch" style="background:${color}"></i>${name}</span>`)
    .join('');
}

function guard(infoEl, fn) {
  try {
    infoEl.classList.remove('err');
    fn();
  } catch (e) {
    infoEl.classList.add('err');
    infoEl.textContent = String(e);
  }
}

function runSolve() {
  guard($('s-info'), () => {
    const r = JSON.parse(solve_case(+$('s-case').value, +$('s-level').value, +$('s-iters').value));
    const f = r.formulas;
    $('s-info').textContent =
      `p = ${f.p}, q = ${f.q}, f = ${f.f}; ${r.bc}. ` +
      `${r.iters_used} sweeps, ${r.converged ? 'converged' : 'not converged'}; published run used J = ${r.published_level}, ${r.published_iters} sweeps.`;
    const series = [
      { points: r.curve, color: COLORS[0], mode: 'line' },
      { points: r.grid, color: COLORS[0], mode: 'dots' },
      { points: r.published, color: COLORS[1], mode: 'dots' },
    ];
    const entries = [['Haar solution', COLORS[0]], ['published values', COLORS[1]]];
    if (r.exact) { series.unshift({ points: r.exact, color: COLORS[2], mode: 'line' }); entries.push(['closed form', COLORS[2]]); }
    legend($('s-legend'), entries);
    plot($('s-plot'), series);
    const hist = r.history.map((d, k) => [k + 1, Math.max(d, 1e-17)]);
    plot($('s-hist'), [{ points: hist, color: COLORS[3], mode: 'line' }, { points: hist, color: COLORS[3], mode: 'dots' }],
      { logY: true, xLabel: 'sweep', integerX: true });
  });
}

function runConverge() {
  guard($('c-info'), () => {
    const r = JSON.parse(convergence_study(+$('c-case').value, +$('c-min').value, +$('c-max').value));
    $('c-info').textContent = `error measured against the ${r.reference}`;
    const pts = r.rows.map((row) => [row.level, row.max_grid_error]);
    plot($('c-plot'), [{ points: pts, color: COLORS[1], mode: 'line' }, { points: pts, color: COLORS[1], mode: 'dots' }],
      { logY: true, xLabel: 'J', integerX: true });
    const head = '<tr><th>J</th><th>2M</th><th>max grid error</th><th>ratio</th><th>sweeps</th></tr>';
    $('c-table').innerHTML = head + r.rows
      .map((row) => `<tr><td>${row.level}</td><td>${row.size}</td><td>${row.max_grid_error.toExponential(3)}</td>` +
        `<td>${row.ratio === null ? '' : row.ratio.toFixed(3)}</td><td>${row.iterations}</td></tr>`)
      .join('');
  });
}

function runFamily() {
  guard($('h-legend'), () => {
    const level = +$('h-level').value;
    $('h-index').max = 2 ** (level + 1);
    const r = JSON.parse(haar_family(level, +$('h-index').value));
    const scale = (pts, k) => pts.map(([x, y]) => [x, y * k]);
    // primitives are tiny at fine levels; rescale so all three share the axis
    const k1 = 0.5 / Math.max(...r.p1.map((p) => p[1]), 1e-300);
    const k2 = 0.5 / Math.max(...r.p2.map((p) => p[1]), 1e-300);
    legend($('h-legend'), [
      [`h_${r.index}`, COLORS[0]],
      [`p1 x ${k1.toPrecision(3)}`, COLORS[1]],
      [`p2 x ${k2.toPrecision(3)}`, COLORS[2]],
    ]);
    plot($('h-plot'), [
      { points: r.h, color: COLORS[0], mode: 'step' },
      { points: scale(r.p1, k1), color: COLORS[1], mode: 'line' },
      { points: scale(r.p2, k2), color: COLORS[2], mode: 'line' },
    ]);
  });
}

await init();
for (const id of ['s-case', 'c-case']) {
  $(id).innerHTML = [1, 2, 3, 4, 5, 6, 7, 8].map((k) => `<option value="${k}">${k}</option>`).join('');
}
$('s-run').onclick = runSolve;
$('c-run').onclick = runConverge;
$('h-run').onclick = runFamily;
runSolve();
runConverge();
runFamily();
