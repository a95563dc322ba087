from PyQt6.QtCore import QObject, QRunnable, Qt, QThreadPool, pyqtSignal
import traceback
import logging


class WorkerSignals(QObject):
    """
    Defines the signals available from a running worker thread.
    """
    finished = pyqtSignal(object)  # (tag, result) once the task returns
    error = pyqtSignal(tuple)  # (tag, exctype, value, traceback)


class Worker(QRunnable):
    """
    Runs one callable on a QThreadPool thread and reports through signals.

    ``tag`` identifies the task in both signals so that results gathered from
    many workers can be put back in submission order.
    """
    def __init__(self, tag, fn, *args, **kwargs):
        super().__init__()
        self.tag = tag
        self.fn = fn
        self.args = args
        self.kwargs = kwargs
        self.signals = WorkerSignals()

    def run(self):
        try:
            result = self.fn(*self.args, **self.kwargs)
            self.signals.finished.emit((self.tag, result))
        except Exception as e:
            logging.error(f"Error in background thread: {str(e)}")
            logging.error(traceback.format_exc())
            self.signals.error.emit((self.tag, type(e), e, traceback.format_exc()))


def run_batch(tasks, max_threads=None):
    """
    Run ``(tag, fn, args)`` tasks on a thread pool and block until all finish.

    Signals use direct connections, so the slots run on the worker threads
    and no Qt event loop is required. Returns ``{tag: result}``; the first
    worker error is re-raised in the calling thread.
    """
    pool = QThreadPool()
    if max_threads:
        pool.setMaxThreadCount(max_threads)
    results, errors, workers = {}, [], []

    def on_finished(payload):
        tag, result = payload
        results[tag] = result

    def on_error(payload):
        errors.append(payload)

    for tag, fn, args in tasks:
        worker = Worker(tag, fn, *args)
        worker.setAutoDelete(False)
        worker.signals.finished.connect(on_finished, type=Qt.ConnectionType.DirectConnection)
        worker.signals.error.connect(on_error, type=Qt.ConnectionType.DirectConnection)
        workers.append(worker)
        pool.start(worker)
    pool.waitForDone()
    if errors:
        _tag, _exctype, value, _tb_str = min(errors, key=lambda e: e[0])
        raise value
    return results


def default_thread_count():
    return QThreadPool.globalInstance().maxThreadCount()
