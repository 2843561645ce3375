"""
Report Generation Script
Summaries of a results CSV: best detector per SNR, turbo-iteration gain
and the SNR each detector needs to reach a target BER
"""

import sys
from pathlib import Path
import argparse
import logging
from datetime import datetime

import numpy as np
import pandas as pd

# Add the repository root to path
sys.path.append(str(Path(__file__).parent.parent))

from src.config.settings import DATA_CONFIG
from src.utils.data_validation import ConfigValidator
from src.utils.logging_config import setup_logging

logger = logging.getLogger(__name__)


def final_iteration(df):
    """Rows of the last turbo iteration per detector and SNR"""
    last = df.groupby(['snr_db', 'detector'])['turbo_iter'].transform('max')
    return df[df['turbo_iter'] == last]


def generate_best_detector_report(df, output_dir):
    """Lowest final-iteration BER at every SNR point"""
    final = final_iteration(df)
    best = final.loc[final.groupby('snr_db')['ber'].idxmin(), ['snr_db', 'detector', 'ber', 'wer', 'n_bits']]
    best = best.sort_values('snr_db').reset_index(drop=True)

    output_path = output_dir / f"best_detector_{datetime.now().strftime('%Y%m%d')}.csv"
    best.to_csv(output_path, index=False)
    print(f"Best-detector report saved to: {output_path}")
    print(f"Report includes {len(best)} SNR points")
    return output_path


def generate_turbo_gain_report(df, output_dir):
    """BER ratio between the first and the last turbo iteration"""
    pivot = df.pivot_table(index=['snr_db', 'detector'], columns='turbo_iter', values='ber')
    if pivot.shape[1] < 2:
        print("Only one turbo iteration in the results; no gain report")
        return None

    first, last = pivot.columns.min(), pivot.columns.max()
    gain = pd.DataFrame({
        'ber_first': pivot[first],
        'ber_last': pivot[last],
    })
    gain['gain_ratio'] = gain['ber_first'] / gain['ber_last'].replace(0.0, np.nan)
    gain = gain.reset_index()

    output_path = output_dir / f"turbo_gain_{datetime.now().strftime('%Y%m%d')}.csv"
    gain.to_csv(output_path, index=False)
    print(f"Turbo gain report saved to: {output_path}")
    print(f"Median gain ratio: {gain['gain_ratio'].median():.2f}")
    return output_path


def required_snr(curve, target_ber):
    """Log-linear interpolation of the SNR where BER crosses target_ber"""
    curve = curve.sort_values('snr_db')
    snr, ber = curve['snr_db'].to_numpy(), curve['ber'].to_numpy()
    for i in range(len(snr) - 1):
        if ber[i] >= target_ber > ber[i + 1] and ber[i + 1] > 0:
            slope = (np.log10(ber[i + 1]) - np.log10(ber[i])) / (snr[i + 1] - snr[i])
            return snr[i] + (np.log10(target_ber) - np.log10(ber[i])) / slope
    return np.nan


def generate_required_snr_report(df, output_dir, target_ber):
    final = final_iteration(df)
    records = [{'detector': detector, 'target_ber': target_ber,
                'required_snr_db': required_snr(curve, target_ber)}
               for detector, curve in final.groupby('detector')]
    report = pd.DataFrame(records)

    output_path = output_dir / f"required_snr_{datetime.now().strftime('%Y%m%d')}.csv"
    report.to_csv(output_path, index=False)
    print(f"Required-SNR report saved to: {output_path}")
    for record in records:
        print(f"  {record['detector']}: {record['required_snr_db']:.2f} dB")
    return output_path


def main():
    parser = argparse.ArgumentParser(description='Generate receiver performance reports')
    parser.add_argument('--results', default=str(DATA_CONFIG['results_path'] / DATA_CONFIG['results_file']),
                        help='Results CSV written by evaluate or sweep')
    parser.add_argument('--type', choices=['best', 'gain', 'snr', 'all'],
                        default='all', help='Type of report to generate')
    parser.add_argument('--target-ber', type=float, default=1e-3)

    args = parser.parse_args()

    setup_logging()

    print(f"Starting report generation: {args.type}")

    try:
        df = pd.read_csv(args.results)
        report = ConfigValidator.validate_results_frame(df)
        if not report['is_valid']:
            raise ValueError(f"Invalid results file: {report['errors']}")
        output_dir = Path(args.results).parent / 'reports'
        output_dir.mkdir(parents=True, exist_ok=True)

        if args.type in ['best', 'all']:
            generate_best_detector_report(df, output_dir)

        if args.type in ['gain', 'all']:
            generate_turbo_gain_report(df, output_dir)

        if args.type in ['snr', 'all']:
            generate_required_snr_report(df, output_dir, args.target_ber)

        print("Report generation completed successfully!")

    except Exception as e:
        logger.error(f"Report generation failed: {e}")
        print(f"Error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
