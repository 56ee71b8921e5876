#!/usr/bin/env python3
"""
命令行接口
生成事件、注入噪声、计算表示、比较表示与一致性实验，每个输出都附带运行清单

退出码: 0 成功, 2 参数错误, 3 I/O 或格式错误, 4 事件流校验失败, 1 其他错误
"""

import sys
import logging
import argparse
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from config.logging_config import setup_logging
from config.settings_loader import EvrepSettings, SettingsError, load_settings, resolve_threads

from .. import __version__
from ..core.events import validate
from ..core.exceptions import (
    ArgumentError, FormatError, ValidationError,
)
from ..io.evt1 import load_stream, write_stream
from ..io.images import RAW_SUFFIXES, PGM_SUFFIXES, load_image, write_pgm
from ..io.rgr1 import read_grid, write_grid
from ..repr import RepresentationFactory, ReprKind
from ..robust.consistency import DEFAULT_KINDS, StudyParams, consistency_study
from ..robust.formatters import export_report
from ..robust.ssim import SsimParams, ssim
from ..simulate.configs import SensorConfig, resolve_config, table_configs
from ..simulate.corpus import synthetic_corpus
from ..simulate.noise import NoiseConfig, inject_noise
from ..simulate.sensor import generate_events
from .manifest import RunManifest, manifest_path

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4


class _Parser(argparse.ArgumentParser):
    """参数错误抛出 ArgumentError，由 main 统一映射为退出码 2"""

    def error(self, message: str):
        raise ArgumentError(f"{self.prog}: {message}")


def _geometry(text: str) -> Tuple[int, int]:
    """解析 HxW"""
    try:
        height, width = (int(v) for v in text.lower().split('x'))
    except ValueError:
        raise argparse.ArgumentTypeError(f"尺寸格式应为 HxW: {text}") from None
    if height <= 0 or width <= 0:
        raise argparse.ArgumentTypeError(f"尺寸必须为正: {text}")
    return height, width


def _name_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config-file', help='YAML 配置文件（默认使用内置 evrep_config.yaml）')
    common.add_argument('--verbose', '-v', action='store_true', help='详细输出（DEBUG 日志）')
    return common


def _add_repr_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--alpha', type=float, help='折扣系数 (默认: 配置文件)')
    parser.add_argument('--rho', type=int, help='折扣邻域半径，必须 > 1 (默认: 配置文件)')
    parser.add_argument('--tau', type=float, help='时间面衰减常数，微秒 (默认: 配置文件)')
    parser.add_argument('--cell', type=int, help='HATS 分块大小 (默认: 配置文件)')
    parser.add_argument('--patch', type=int, help='排序时间面按块排序的块大小 (默认: 配置文件，未设置为全局排序)')


def build_parsers() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    """构建顶层解析器与各子命令解析器"""
    common = _common_parser()
    parser = _Parser(
        prog='evrep',
        description="evrep - 事件相机表示计算与鲁棒性评估工具",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用示例:
  # 在静止图像上按 Original 配置生成事件
  evrep gen flat.pgm Original 1 out.evt1

  # 注入背景活动与热像素噪声
  evrep inject out.evt1 noisy.evt1 --ba-rate 0.5 --hot-pixels 2 --hot-rate 200 --seed 7

  # 计算排序折扣时间戳图
  evrep repr noisy.evt1 dist --alpha 5 --rho 3 out.rgr1

  # 比较两个表示
  evrep compare a.rgr1 b.rgr1 --window 11

  # 生成合成图像集并运行一致性实验
  evrep synth corpus/ --count 16
  evrep study corpus/ results/ --kinds dist,timestamp,dit,sorted_ts
        """
    )
    parser.add_argument('--version', action='version', version=f"evrep {__version__}")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_Parser)
    commands: Dict[str, argparse.ArgumentParser] = {}

    gen = sub.add_parser('gen', parents=[common], help='由静止图像生成 EVT1 事件流')
    gen.add_argument('image', help='PGM 或 .f32 图像')
    gen.add_argument('config_name', nargs='?', metavar='config', help='配置名 (Original, Validation 1..9) 或 key=value 配置文件')
    gen.add_argument('seed_arg', nargs='?', type=int, metavar='seed', help='随机种子')
    gen.add_argument('out_arg', nargs='?', metavar='out', help='输出 EVT1 路径')
    gen.add_argument('--config', dest='config_opt', help='同位置参数 config')
    gen.add_argument('--seed', dest='seed_opt', type=int, help='同位置参数 seed')
    gen.add_argument('--out', dest='out_opt', help='同位置参数 out')
    gen.add_argument('--sensor', type=_geometry, help='传感器尺寸 HxW (默认: 配置文件)')
    commands['gen'] = gen

    rep = sub.add_parser('repr', parents=[common], help='计算表示并写出 RGR1')
    rep.add_argument('stream', help='EVT1 或 CSV 事件流')
    rep.add_argument('kind', help=f"表示类型: {', '.join(k.value for k in ReprKind)}")
    rep.add_argument('out_arg', nargs='?', metavar='out', help='输出 RGR1 路径')
    rep.add_argument('--out', dest='out_opt', help='同位置参数 out')
    rep.add_argument('--geometry', type=_geometry, help='CSV 输入的传感器尺寸 HxW')
    _add_repr_flags(rep)
    commands['repr'] = rep

    cmp_ = sub.add_parser('compare', parents=[common], help='计算两个 RGR1 网格的 SSIM')
    cmp_.add_argument('a', help='RGR1 文件')
    cmp_.add_argument('b', help='RGR1 文件')
    cmp_.add_argument('--window', type=int, help='SSIM 窗口（奇数, 默认: 配置文件）')
    commands['compare'] = cmp_

    study = sub.add_parser('study', parents=[common], help='表示一致性实验')
    study.add_argument('corpus', help='图像目录（.pgm / .f32 / .raw）')
    study.add_argument('out_arg', nargs='?', metavar='out', help='报告输出目录')
    study.add_argument('--out', dest='out_opt', help='同位置参数 out')
    study.add_argument('--kinds', type=_name_list, help='逗号分隔的表示类型 (默认: 全部可比较类型)')
    study.add_argument('--variants', type=_name_list, help='逗号分隔的配置名 (默认: 全部十组)')
    study.add_argument('--seed', type=int, help='噪声基准种子 (默认: 0)')
    study.add_argument('--threads', type=int, help='并行线程数，0 为自动 (默认: EVREP_THREADS / 配置文件)')
    study.add_argument('--sensor', type=_geometry, help='传感器尺寸 HxW (默认: 配置文件)')
    study.add_argument('--window', type=int, help='SSIM 窗口 (默认: 配置文件)')
    _add_repr_flags(study)
    commands['study'] = study

    inject = sub.add_parser('inject', parents=[common], help='向事件流注入噪声')
    inject.add_argument('stream', help='EVT1 或 CSV 事件流')
    inject.add_argument('out_arg', nargs='?', metavar='out', help='输出 EVT1 路径')
    inject.add_argument('--out', dest='out_opt', help='同位置参数 out')
    inject.add_argument('--geometry', type=_geometry, help='CSV 输入的传感器尺寸 HxW')
    inject.add_argument('--ba-rate', type=float, help='背景活动，每像素每秒 (默认: 配置文件)')
    inject.add_argument('--hot-pixels', type=int, help='热像素个数 (默认: 配置文件)')
    inject.add_argument('--hot-rate', type=float, help='每个热像素每秒事件数 (默认: 配置文件)')
    inject.add_argument('--seed', type=int, default=0, help='随机种子 (默认: 0)')
    commands['inject'] = inject

    configs = sub.add_parser('configs', parents=[common], help='列出十组命名配置')
    commands['configs'] = configs

    val = sub.add_parser('validate', parents=[common], help='校验事件流')
    val.add_argument('stream', help='EVT1 或 CSV 事件流')
    val.add_argument('--geometry', type=_geometry, help='CSV 输入的传感器尺寸 HxW')
    commands['validate'] = val

    synth = sub.add_parser('synth', parents=[common], help='生成合成图像集（PGM）')
    synth.add_argument('out_arg', nargs='?', metavar='out', help='输出目录')
    synth.add_argument('--out', dest='out_opt', help='同位置参数 out')
    synth.add_argument('--count', type=int, help='图像数量 (默认: 配置文件)')
    synth.add_argument('--size', type=int, help='图像边长 (默认: 配置文件)')
    synth.add_argument('--seed', type=int, default=0, help='随机种子 (默认: 0)')
    commands['synth'] = synth

    return parser, commands


def _pick(*values):
    """返回第一个非 None 的值"""
    for value in values:
        if value is not None:
            return value
    return None


def _require_out(args: argparse.Namespace) -> Path:
    out = _pick(args.out_opt, args.out_arg)
    if out is None:
        raise ArgumentError("缺少输出路径（位置参数 out 或 --out）")
    return Path(out)


def _repr_params(args: argparse.Namespace, settings: EvrepSettings) -> Dict[str, Any]:
    rep = settings.representation
    return {
        'alpha': _pick(args.alpha, rep.alpha),
        'rho': _pick(args.rho, rep.rho),
        'tau': _pick(args.tau, rep.tau),
        'cell': _pick(args.cell, rep.cell),
        'patch': _pick(args.patch, rep.patch),
    }


def _sensor(args: argparse.Namespace, settings: EvrepSettings, seed: int) -> SensorConfig:
    s = settings.sensor
    geometry = getattr(args, 'sensor', None) or (s.height, s.width)
    return SensorConfig(geometry=geometry, contrast_threshold=s.contrast_threshold,
                        refractory=s.refractory, seed=seed,
                        threshold_sigma=s.threshold_sigma, dt=s.dt)


def _ssim_params(window: Optional[int], settings: EvrepSettings) -> SsimParams:
    s = settings.ssim
    return SsimParams(window=_pick(window, s.window), k1=s.k1, k2=s.k2, dynamic_range=s.dynamic_range)


def _write_manifest(argv: Sequence[str], params: Dict[str, Any], inputs: Sequence[Path],
                    outputs: Sequence[Path], target: Path) -> Path:
    manifest = RunManifest(tool_version=__version__, command=['evrep', *argv], params=params)
    manifest.add_inputs(inputs).add_outputs(outputs)
    return manifest.save(manifest_path(target))


def cmd_gen(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """由图像生成事件流"""
    out = _require_out(args)
    config_name = _pick(args.config_opt, args.config_name, "Original")
    seed = _pick(args.seed_opt, args.seed_arg, settings.sensor.seed)

    image = load_image(args.image)
    config = resolve_config(config_name, settings.trajectory.mm_to_px, settings.trajectory.duration)
    sensor = _sensor(args, settings, seed)

    stream = generate_events(image, config.trajectory, config.photometric, sensor)
    size = write_stream(stream, out)

    sensor_params = asdict(sensor)
    sensor_params['geometry'] = list(sensor.geometry)
    _write_manifest(argv, {'config': config.to_dict(), 'sensor': sensor_params, 'seed': seed},
                    [Path(args.image)], [out], out)
    print(f"✅ 已写出 {out}: {len(stream)} 个事件, {size} 字节")
    return EXIT_OK


def cmd_repr(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """计算表示"""
    out = _require_out(args)
    kind = ReprKind.parse(args.kind)
    stream = load_stream(args.stream, args.geometry)

    params = _repr_params(args, settings)
    grid = RepresentationFactory.compute(kind, stream, params)
    size = write_grid(grid, out)

    _write_manifest(argv, {'kind': kind.value, **grid.params}, [Path(args.stream)], [out], out)
    print(f"✅ 已写出 {out}: {kind.value} {grid.data.shape}, {size} 字节")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """比较两个表示"""
    a = read_grid(args.a)
    b = read_grid(args.b)
    value = ssim(a, b, _ssim_params(args.window, settings))
    print(f"ssim={value:.6f}")
    return EXIT_OK


def _corpus_files(corpus: Path) -> List[Path]:
    if not corpus.is_dir():
        raise FileNotFoundError(f"图像目录不存在: {corpus}")
    suffixes = PGM_SUFFIXES + RAW_SUFFIXES
    return sorted(p for p in corpus.iterdir() if p.is_file() and p.suffix.lower() in suffixes)


def cmd_study(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """一致性实验"""
    out_dir = _require_out(args)
    files = _corpus_files(Path(args.corpus))
    if not files:
        raise ArgumentError("empty corpus")

    images = [(path.stem, load_image(path)) for path in files]
    noise = settings.noise
    rep = _repr_params(args, settings)
    params = StudyParams(
        alpha=_pick(args.alpha, settings.study.alpha), rho=rep['rho'], tau=rep['tau'],
        cell=rep['cell'], patch=rep['patch'],
        sensor=_sensor(args, settings, settings.sensor.seed),
        noise=NoiseConfig(noise.ba_rate, noise.hot_pixel_count, noise.hot_rate, _pick(args.seed, 0)),
        ssim_params=_ssim_params(args.window, settings),
        threads=resolve_threads(_pick(args.threads, settings.study.threads)),
    )

    traj = settings.trajectory
    all_configs = table_configs(traj.mm_to_px, traj.duration)
    wanted = args.variants or [c.name for c in all_configs]
    variants = [resolve_config(name, traj.mm_to_px, traj.duration) for name in wanted]
    kinds = args.kinds or [k.value for k in DEFAULT_KINDS]

    report = consistency_study(images, kinds, variants, params)
    written = export_report(report, out_dir, tool_version=__version__)
    outputs = list(written.values())

    for path in outputs:
        _write_manifest(argv, report.params, files, [path], path)
    samples_dir = out_dir / "samples"
    samples_dir.mkdir(exist_ok=True)
    for path in files:
        _write_manifest(argv, report.params, [path], outputs, samples_dir / path.stem)

    print(f"✅ 一致性实验完成: {len(images)} 张图像, {len(variants)} 组配置, {len(report.params['kinds'])} 种表示")
    for name, path in written.items():
        print(f"   {name}: {path}")

    if report.has_failures:
        for failure in report.failures:
            print(f"❌ 样本失败: {failure['sample']} / {failure['variant']}: {failure['error']}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_inject(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """注入噪声"""
    out = _require_out(args)
    noise = settings.noise
    cfg = NoiseConfig(
        ba_rate=_pick(args.ba_rate, noise.ba_rate),
        hot_pixel_count=_pick(args.hot_pixels, noise.hot_pixel_count),
        hot_rate=_pick(args.hot_rate, noise.hot_rate),
        seed=args.seed,
    )
    stream = load_stream(args.stream, args.geometry)
    noisy = inject_noise(stream, cfg)
    size = write_stream(noisy, out)

    _write_manifest(argv, {'noise': asdict(cfg)}, [Path(args.stream)], [out], out)
    print(f"✅ 已写出 {out}: {len(noisy)} 个事件（新增 {len(noisy) - len(stream)}）, {size} 字节")
    return EXIT_OK


def cmd_configs(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """列出命名配置"""
    traj = settings.trajectory
    frame = pd.DataFrame([c.to_dict() for c in table_configs(traj.mm_to_px, traj.duration)])
    print(frame.to_string(index=False))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """校验事件流"""
    try:
        stream = load_stream(args.stream, args.geometry)
    except ValidationError as e:
        report = e.report
    else:
        report = validate(stream)

    if report.is_valid:
        print("✅ 事件流合法")
        return EXIT_OK
    for message in report.messages():
        print(message)
    return EXIT_VALIDATION


def cmd_synth(args: argparse.Namespace, settings: EvrepSettings, argv: Sequence[str]) -> int:
    """生成合成图像集"""
    out_dir = _require_out(args)
    out_dir.mkdir(parents=True, exist_ok=True)
    count = _pick(args.count, settings.study.corpus_size)
    size = _pick(args.size, settings.study.image_size)

    written = []
    for name, image in synthetic_corpus(count, size, args.seed):
        path = out_dir / f"{name}.pgm"
        write_pgm(image, path)
        written.append(path)

    _write_manifest(argv, {'count': count, 'size': size, 'seed': args.seed}, [], written, out_dir / "corpus")
    print(f"✅ 已生成 {len(written)} 张图像: {out_dir}")
    return EXIT_OK


HANDLERS: Dict[str, Callable[[argparse.Namespace, EvrepSettings, Sequence[str]], int]] = {
    'gen': cmd_gen,
    'repr': cmd_repr,
    'compare': cmd_compare,
    'study': cmd_study,
    'inject': cmd_inject,
    'configs': cmd_configs,
    'validate': cmd_validate,
    'synth': cmd_synth,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数，返回退出码"""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, commands = build_parsers()
    verbose = '--verbose' in argv or '-v' in argv

    try:
        if not argv or argv[0] not in commands:
            # 只用于 --help / --version 与未知命令的报错
            parser.parse_args(argv)
            parser.print_help()
            return EXIT_USAGE

        command = argv[0]
        # 允许位置参数与选项交错
        args = commands[command].parse_intermixed_args(argv[1:])

        settings = load_settings(args.config_file)
        setup_logging(level="DEBUG" if args.verbose else settings.logging.level,
                      log_file=settings.logging.log_file, enable_file=settings.logging.enable_file)
        logger.debug(f"执行命令: {command} {argv[1:]}")

        return HANDLERS[command](args, settings, argv)

    except (ArgumentError, SettingsError) as e:
        print(f"❌ 参数错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FormatError, OSError) as e:
        print(f"❌ 读写失败: {e}", file=sys.stderr)
        return EXIT_IO
    except KeyboardInterrupt:
        print("\n⚠️ 用户中断", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as e:
        print(f"❌ 程序执行出错: {e}", file=sys.stderr)
        if verbose:
            import traceback
            traceback.print_exc()
        return EXIT_FAILURE


def run():
    """控制台入口"""
    sys.exit(main())


if __name__ == "__main__":
    run()
