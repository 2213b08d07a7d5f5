import init, { sealText, openHex, flipMask, paperRankings } from "./pkg/mistylink_wasm_demo.js";

const $ = (id) => document.getElementById(id);
let frame = [];
let flipped = new Set();

function renderFrame() {
  const box = $("frame");
  box.replaceChildren();
  frame.forEach((b, i) => {
    const s = document.createElement("span");
    s.textContent = b.toString(16).padStart(2, "0");
    if (flipped.has(i)) s.className = "flipped";
    s.onclick = () => {
      frame[i] ^= 1;
      flipped.has(i) ? flipped.delete(i) : flipped.add(i);
      renderFrame();
    };
    box.append(s);
  });
}

function show(el, fn) {
  try {
    el.textContent = fn();
    el.className = "";
  } catch (e) {
    el.textContent = e.message ?? String(e);
    el.className = "error";
  }
}

function seal() {
  show($("opened"), () => {
    const hex = sealText($("enc").value, $("mac").value, $("encrypt").checked,
      Number($("dst").value), Number($("src").value), Number($("ctr").value), $("payload").value);
    frame = hex.match(/../g).map((h) => parseInt(h, 16));
    flipped = new Set();
    renderFrame();
    return "";
  });
}

function open() {
  const hex = frame.map((b) => b.toString(16).padStart(2, "0")).join("");
  show($("opened"), () => "accepted: " + openHex($("enc").value, $("mac").value, hex));
}

function drawMask(id, cbc, bit) {
  const mask = flipMask(cbc, 64, bit);
  const grid = $(id);
  grid.replaceChildren();
  mask.forEach((m, i) => {
    const d = document.createElement("div");
    if (m) d.className = "bad";
    if (i === bit) d.classList.add("hit");
    grid.append(d);
  });
  return mask.reduce((a, b) => a + b, 0);
}

function propagate() {
  const bit = Number($("bit").value);
  const ofb = drawMask("ofb", false, bit);
  const cbc = drawMask("cbc", true, bit);
  $("bitval").textContent = `${bit}: OFB ${ofb} bit(s), CBC ${cbc} bit(s) wrong`;
}

await init();
$("seal").onclick = seal;
$("open").onclick = open;
$("bit").oninput = propagate;
$("rank").onclick = () => show($("rankings"), paperRankings);
seal();
propagate();
